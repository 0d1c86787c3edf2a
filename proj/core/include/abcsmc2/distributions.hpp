#pragma once

#include <span>

#include "abcsmc2/rng.hpp"

namespace abcsmc2 {

/// Azzalini skew normal SN(mu, sigma, gamma); gamma is the shape parameter.
struct SkewNormalParams {
  double mu = 0.0;
  double sigma = 1.0;  // > 0
  double gamma = 0.0;
};

/// Stable distribution in the parameterization whose characteristic function
/// for alpha != 1 is exp{-gamma^alpha |u|^alpha [1 - i beta tan(pi alpha/2)
/// sign u] + i delta u}, with the usual log-corrected alpha = 1 branch.
struct StableParams {
  double alpha = 2.0;  // stability, (0, 2]
  double beta = 0.0;   // skewness, [-1, 1]
  double gamma = 1.0;  // scale, > 0
  double delta = 0.0;  // position
};

struct Ar1Params {
  double phi = 0.0;
  double sigma = 1.0;  // innovation std, > 0
  double intercept = 0.0;
};

/// Draw with density (2/sigma) phi((z-mu)/sigma) Phi(gamma (z-mu)/sigma).
double sample_skew_normal(const SkewNormalParams& p, RngStream& rng);

/// Chambers-Mallows-Stuck sampler, exact for all (alpha, beta), including the
/// alpha = 1 branch. Scale and position applied afterwards (for alpha = 1 the
/// shift picks up the (2/pi) beta gamma log(gamma) term implied by the CF).
double sample_stable(const StableParams& p, RngStream& rng);

/// Draw from N(intercept + phi * x, sigma^2).
double ar1_step(double x, const Ar1Params& p, RngStream& rng);

/// 1 / (1 + exp(-x)), evaluated in the numerically stable branch.
double inv_logit(double x);

/// log(p / (1 - p)); domain error outside (0, 1).
double logit(double p);

/// Sample skewness m3 / m2^{3/2} with 1/n central moments (the g1 form).
/// Domain error on length < 2 or zero variance.
double skewness_stat(std::span<const double> sample);

}  // namespace abcsmc2
