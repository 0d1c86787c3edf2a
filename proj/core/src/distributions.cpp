#include "abcsmc2/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace abcsmc2 {

double sample_skew_normal(const SkewNormalParams& p, RngStream& rng) {
  // X = mu + sigma (delta |U0| + sqrt(1 - delta^2) U1), delta = gamma/sqrt(1+gamma^2).
  const double delta = p.gamma / std::sqrt(1.0 + p.gamma * p.gamma);
  const double u0 = rng.normal();
  const double u1 = rng.normal();
  return p.mu +
         p.sigma * (delta * std::fabs(u0) + std::sqrt(1.0 - delta * delta) * u1);
}

double sample_stable(const StableParams& p, RngStream& rng) {
  const double alpha = p.alpha;
  const double beta = p.beta;
  const double u = M_PI * (rng.uniform01() - 0.5);  // uniform on (-pi/2, pi/2)
  const double w = rng.exponential();
  double x;
  if (alpha != 1.0) {
    const double tan_half = std::tan(0.5 * M_PI * alpha);
    const double b = std::atan(beta * tan_half) / alpha;
    const double s =
        std::pow(1.0 + beta * beta * tan_half * tan_half, 0.5 / alpha);
    x = s * std::sin(alpha * (u + b)) /
        std::pow(std::cos(u), 1.0 / alpha) *
        std::pow(std::cos(u - alpha * (u + b)) / w, (1.0 - alpha) / alpha);
    return p.gamma * x + p.delta;
  }
  const double half_pi = 0.5 * M_PI;
  x = (1.0 / half_pi) *
      ((half_pi + beta * u) * std::tan(u) -
       beta * std::log((half_pi * w * std::cos(u)) / (half_pi + beta * u)));
  return p.gamma * x + (2.0 / M_PI) * beta * p.gamma * std::log(p.gamma) +
         p.delta;
}

double ar1_step(double x, const Ar1Params& p, RngStream& rng) {
  return p.intercept + p.phi * x + p.sigma * rng.normal();
}

double inv_logit(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("logit: argument must lie in (0,1)");
  }
  return std::log(p / (1.0 - p));
}

double skewness_stat(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::domain_error("skewness_stat: need at least 2 values");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : sample) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0.0) throw std::domain_error("skewness_stat: zero variance");
  return m3 / std::pow(m2, 1.5);
}

}  // namespace abcsmc2
