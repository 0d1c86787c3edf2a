#include "abcsmc2/model.hpp"

namespace abcsmc2 {

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> violations;
  if (cfg.n_theta < 1) violations.push_back("n_theta must be >= 1");
  if (cfg.n_x < 1) violations.push_back("n_x must be >= 1");
  if (cfg.n_y < 1) violations.push_back("n_y must be >= 1");
  if (!(cfg.p_acc > 0.0 && cfg.p_acc <= 1.0)) {
    violations.push_back("p_acc must lie in (0,1]");
  }
  if (!(cfg.ess_fraction > 0.0 && cfg.ess_fraction <= 1.0)) {
    violations.push_back("ess_fraction must lie in (0,1]");
  }
  if (cfg.horizon < 1) violations.push_back("horizon must be >= 1");
  return violations;
}

}  // namespace abcsmc2
