#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "abcsmc2/rng.hpp"

namespace abcsmc2 {

/// One simulated dataset's contribution to threshold calibration:
/// its distance to the observation and the mass (Z * u) behind it.
struct CalibrationRecord {
  double distance = 0.0;  // >= 0
  double weight = 0.0;    // >= 0
};

/// Effective sample size (sum w)^2 / sum w^2. Scale-invariant,
/// in [1, w.size()]. Domain error if all weights are zero.
double ess(std::span<const double> weights);

/// Normalize to sum 1; returns the normalized vector and the original total.
/// An all-zero input is a valid "dead cloud" and comes back all-zero with
/// total 0 rather than raising.
std::pair<std::vector<double>, double> normalize(std::span<const double> weights);

/// Draw `count` indices independently with probability proportional to
/// weight. Domain error if the total weight is zero.
std::vector<std::size_t> multinomial_resample(std::span<const double> weights,
                                              std::size_t count,
                                              RngStream& rng);

/// Smallest distance delta among the records such that the weight fraction
/// with distance <= delta reaches p. Ties on distance are accumulated before
/// the crossing test, so the result is well-defined and inclusive.
/// Domain error on empty input or zero total weight.
double weighted_quantile_threshold(std::span<const CalibrationRecord> records,
                                   double p);

/// In-place variant for large record sets: sorts `records` by distance.
double weighted_quantile_threshold_inplace(std::vector<CalibrationRecord>& records,
                                           double p);

/// Weighted quantile of arbitrary real values (used for credible and
/// filtering intervals): smallest v with cumulative weight fraction >= q.
double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double q);

}  // namespace abcsmc2
