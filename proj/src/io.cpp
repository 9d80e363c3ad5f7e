#include "cclab/io.hpp"

namespace cclab {

nlohmann::json matrix_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < M.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int k = 0; k < M.cols(); ++k) r.push_back(M(i, k));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw Error(ErrorCode::BadInput, "matrix must have " + std::to_string(rows) + " rows");
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& r = j[i];
    if (!r.is_array() || static_cast<int>(r.size()) != cols)
      throw Error(ErrorCode::BadInput, "matrix row must have " + std::to_string(cols) + " entries");
    for (int k = 0; k < cols; ++k) {
      if (!r[k].is_number()) throw Error(ErrorCode::BadInput, "matrix entries must be numbers");
      M(i, k) = r[k].get<double>();
    }
  }
  return M;
}

nlohmann::json to_json(const FuchsianRep& rep) {
  nlohmann::json g = nlohmann::json::array();
  for (const Mat2& A : rep.images) g.push_back(matrix_json(A));
  return {{"genus", rep.genus}, {"model", rep.model}, {"generators", g}};
}

FuchsianRep fuchsian_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("genus") || !j.contains("generators"))
    throw Error(ErrorCode::BadInput, "Fuchsian JSON needs genus and generators");
  int genus = j.at("genus").get<int>();
  std::vector<Mat2> img;
  for (const auto& m : j.at("generators")) img.push_back(matrix_from_json(m, 2, 2));
  FuchsianRep rep = fuchsian_from_images(genus, img, j.value("model", std::string("explicit")));
  if (relator_residual(rep) > 1e-8) throw Error(ErrorCode::BadInput, "generators violate the surface relator");
  return rep;
}

nlohmann::json to_json(const HitchinRep& rep) {
  nlohmann::json g = nlohmann::json::object();
  for (int k = 0; k < static_cast<int>(rep.images.size()); ++k) g[generator_name(k)] = matrix_json(rep.images[k]);
  return {{"genus", rep.genus},       {"provenance", rep.provenance},   {"bulge_s", rep.bulge_s},
          {"handle_s", rep.handle_s}, {"fuchsian", to_json(rep.fuchsian)}, {"generators", g},
          {"relator_residual", relator_residual(rep)}};
}

HitchinRep hitchin_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("generators") || !j.contains("fuchsian"))
    throw Error(ErrorCode::BadInput, "Hitchin JSON needs generators and fuchsian");
  HitchinRep rep;
  rep.genus = j.value("genus", 2);
  rep.provenance = j.value("provenance", std::string("fuchsian"));
  rep.bulge_s = j.value("bulge_s", 0.0);
  rep.handle_s = j.value("handle_s", 0.0);
  rep.fuchsian = fuchsian_from_json(j.at("fuchsian"));
  for (int k = 0; k < 2 * rep.genus; ++k) {
    const std::string name = generator_name(k);
    if (!j.at("generators").contains(name)) throw Error(ErrorCode::BadInput, "Hitchin JSON lacks generator " + name);
    Mat3 A = matrix_from_json(j.at("generators").at(name), 3, 3);
    if (std::abs(A.determinant() - 1.0) > 1e-8) throw Error(ErrorCode::BadInput, "generator " + name + " not in SL(3,R)");
    rep.images.push_back(A);
    rep.inverses.push_back(A.inverse());
  }
  if (relator_residual(rep) > 1e-8) throw Error(ErrorCode::BadInput, "generators violate the surface relator");
  return rep;
}

nlohmann::json to_json(const CoaffineRep& eta) {
  nlohmann::json g = nlohmann::json::object();
  for (int k = 0; k < static_cast<int>(eta.images.size()); ++k) g[generator_name(k)] = matrix_json(eta.images[k]);
  return {{"linear_part", to_json(eta.linear_part)},
          {"cocycle", to_json(eta.cocycle)},
          {"generators", g},
          {"relator_residual", relator_residual(eta)}};
}

CoaffineRep coaffine_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("linear_part") || !j.contains("cocycle"))
    throw Error(ErrorCode::BadInput, "coaffine JSON needs linear_part and cocycle");
  HitchinRep rho = hitchin_from_json(j.at("linear_part"));
  return assemble(rho, cocycle_from_json(j.at("cocycle"), rho.genus));
}

}  // namespace cclab
