#pragma once

#include "cclab/coaffine.hpp"

#include "json.hpp"

namespace cclab {

// Matrices are arrays of rows; generators are keyed a1, b1, ... in presentation order.
nlohmann::json matrix_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, int rows, int cols);

// {genus, model, generators: [[2x2 rows], ...]}; the model tag defaults to "explicit".
nlohmann::json to_json(const FuchsianRep& rep);
FuchsianRep fuchsian_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HitchinRep& rep);
HitchinRep hitchin_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CoaffineRep& eta);
CoaffineRep coaffine_from_json(const nlohmann::json& j);  // reassembled from its cocycle

}  // namespace cclab
