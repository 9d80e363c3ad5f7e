#pragma once

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cclab {

struct AcceptanceOptions {
  unsigned seed = 20261014;
  int L = 8;        // default hull depth
  int L_fine = 10;  // refinement depth for the psi and localization rows
};

// One row of the acceptance table; detail carries every residual next to its tolerance.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  nlohmann::json detail = nlohmann::json::object();
  double seconds = 0;
};

constexpr int kCriterionCount = 10;

// The hull rows (4, 5, 10) share hulls through a per-run cache, so running the full suite
// is cheaper than running the rows one by one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_row = {});
CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

std::string format_row(const CriterionResult& r);  // "PASS  3  tail series  (0.02 s)"
nlohmann::json to_json(const CriterionResult& r);

}  // namespace cclab
