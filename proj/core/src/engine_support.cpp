#include <cmath>
#include <span>

#include "abcsmc2/engine.hpp"
#include "abcsmc2/particle.hpp"

namespace abcsmc2 {

double calibrate_threshold(std::vector<CalibrationRecord>& records,
                           double p_acc) {
  double total = 0.0;
  for (const auto& r : records) total += r.weight;
  if (records.empty() || total <= 0.0) {
    throw TotalParticleDeath(
        "threshold calibration received zero total weight: every cloud is "
        "dead; increase p_acc or n_y");
  }
  return weighted_quantile_threshold_inplace(records, p_acc);
}

double abc_emission_weight(std::span<const double> distances, double eps,
                           double u) {
  if (u == 0.0) return 0.0;
  std::size_t accepted = 0;
  for (double d : distances) {
    if (d <= eps) ++accepted;
  }
  return u * static_cast<double>(accepted) /
         static_cast<double>(distances.size());
}

}  // namespace abcsmc2
