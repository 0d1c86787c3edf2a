#pragma once

namespace abcsmc2 {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (Wichura's PPND16, ~1e-15 accurate).
/// Domain error outside (0, 1).
double normal_quantile(double p);

/// log of the standard normal density.
double normal_log_pdf(double x);

}  // namespace abcsmc2
