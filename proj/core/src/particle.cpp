#include "abcsmc2/particle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace abcsmc2 {

double ess(std::span<const double> weights) {
  if (weights.empty()) throw std::domain_error("ess: empty weight vector");
  double sum = 0.0, sum_sq = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw std::domain_error("ess: weights must be finite and non-negative");
    }
    sum += w;
    sum_sq += w * w;
  }
  if (sum <= 0.0) throw std::domain_error("ess: all weights are zero");
  return sum * sum / sum_sq;
}

std::pair<std::vector<double>, double> normalize(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out(weights.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
  }
  return {std::move(out), total};
}

std::vector<std::size_t> multinomial_resample(std::span<const double> weights,
                                              std::size_t count,
                                              RngStream& rng) {
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::domain_error("multinomial_resample: negative weight");
    }
    acc += weights[i];
    cumulative[i] = acc;
  }
  if (weights.empty() || acc <= 0.0) {
    throw std::domain_error("multinomial_resample: total weight is zero");
  }
  std::vector<std::size_t> indices(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double target = rng.uniform01() * acc;
    const auto it =
        std::lower_bound(cumulative.begin(), cumulative.end(), target);
    indices[k] = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(weights.size()) - 1));
  }
  return indices;
}

namespace {

double quantile_scan_sorted(std::span<const CalibrationRecord> sorted, double p) {
  double total = 0.0;
  for (const auto& rec : sorted) total += rec.weight;
  if (total <= 0.0) {
    throw std::domain_error("weighted_quantile_threshold: zero total weight");
  }
  const double target = p * total;
  double acc = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double d = sorted[i].distance;
    // Accumulate the whole tie group before testing the crossing.
    while (i < sorted.size() && sorted[i].distance == d) {
      acc += sorted[i].weight;
      ++i;
    }
    if (acc >= target) return d;
  }
  // Accumulated rounding can leave acc marginally below p*total; the
  // largest distance is the correct answer for p = 1.
  return sorted.back().distance;
}

}  // namespace

double weighted_quantile_threshold(std::span<const CalibrationRecord> records,
                                   double p) {
  if (records.empty()) {
    throw std::domain_error("weighted_quantile_threshold: no records");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("weighted_quantile_threshold: p must lie in (0,1]");
  }
  std::vector<CalibrationRecord> sorted(records.begin(), records.end());
  return weighted_quantile_threshold_inplace(sorted, p);
}

double weighted_quantile_threshold_inplace(std::vector<CalibrationRecord>& records,
                                           double p) {
  if (records.empty()) {
    throw std::domain_error("weighted_quantile_threshold: no records");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("weighted_quantile_threshold: p must lie in (0,1]");
  }
  std::sort(records.begin(), records.end(),
            [](const CalibrationRecord& a, const CalibrationRecord& b) {
              return a.distance < b.distance;
            });
  return quantile_scan_sorted(records, p);
}

double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double q) {
  if (values.empty() || values.size() != weights.size()) {
    throw std::domain_error("weighted_quantile: bad input sizes");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::domain_error("weighted_quantile: q must lie in (0,1]");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw std::domain_error("weighted_quantile: zero total weight");
  const double target = q * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += weights[order[k]];
    if (acc >= target) return values[order[k]];
  }
  return values[order.back()];
}

}  // namespace abcsmc2
