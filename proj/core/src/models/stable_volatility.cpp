#include "abcsmc2/models/stable_volatility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "abcsmc2/distributions.hpp"
#include "abcsmc2/normal.hpp"

namespace abcsmc2::models {

SvKernelResult sv_kernel(double theta, double c, double sigma_xi_hat,
                         RngStream& rng) {
  const double xi = normal_quantile(0.5 * (theta + 1.0));
  const double xi_new = xi + c * sigma_xi_hat * rng.normal();
  SvKernelResult out;
  out.proposal = 2.0 * normal_cdf(xi_new) - 1.0;
  out.log_ratio = normal_log_pdf(xi) - normal_log_pdf(xi_new);
  return out;
}

StableVolModel::StableVolModel(const StableVolOptions& opts) : opts_(opts) {
  if (opts_.sigma_h <= 0.0) {
    throw std::invalid_argument("StableVolModel: sigma_h must be > 0");
  }
  if (!(opts_.alpha > 0.0 && opts_.alpha <= 2.0) ||
      std::fabs(opts_.beta) > 1.0 || opts_.gamma <= 0.0) {
    throw std::invalid_argument("StableVolModel: invalid stable parameters");
  }
}

ParamVector StableVolModel::prior_sample(RngStream& rng) const {
  return {2.0 * rng.uniform01() - 1.0};
}

double StableVolModel::prior_log_density(const ParamVector& theta) const {
  if (theta[0] <= -1.0 || theta[0] >= 1.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return -std::log(2.0);
}

double StableVolModel::initial_proposal_sample(const ParamVector& theta,
                                               RngStream& rng) const {
  // Stationary distribution of the AR(1) state process.
  const double phi = theta[0];
  const double mean = opts_.mu / (1.0 - phi);
  const double sd = opts_.sigma_h / std::sqrt(1.0 - phi * phi);
  return mean + sd * rng.normal();
}

double StableVolModel::transition_proposal_sample(const double& prev,
                                                  const ParamVector& theta,
                                                  int, RngStream& rng) const {
  return opts_.mu + theta[0] * prev + opts_.sigma_h * rng.normal();
}

double StableVolModel::emission_simulate(const double& state,
                                         const ParamVector&, int,
                                         RngStream& rng) const {
  const StableParams p{opts_.alpha, opts_.beta, opts_.gamma, opts_.delta};
  return std::exp(0.5 * state) * sample_stable(p, rng);
}

double StableVolModel::distance(const double& simulated,
                                const double& observed, int) const {
  return std::fabs(simulated - observed);
}

ParamVector StableVolModel::kernel_propose(const ParamVector& theta,
                                           const CloudStatistics& stats,
                                           RngStream& rng) const {
  const double sigma_xi = std::sqrt(std::max(0.0, stats.covariance(0, 0)));
  return {sv_kernel(theta[0], opts_.kernel_c, sigma_xi, rng).proposal};
}

double StableVolModel::kernel_log_ratio(const ParamVector& proposed,
                                        const ParamVector& current) const {
  return normal_log_pdf(normal_quantile(0.5 * (current[0] + 1.0))) -
         normal_log_pdf(normal_quantile(0.5 * (proposed[0] + 1.0)));
}

ParamVector StableVolModel::kernel_parameterization(
    const ParamVector& theta) const {
  return {normal_quantile(0.5 * (theta[0] + 1.0))};
}

bool StableVolModel::gaussian_case() const {
  return opts_.alpha == 2.0 && opts_.beta == 0.0;
}

double StableVolModel::gaussian_emission_log_density(double y, double x) const {
  if (!gaussian_case()) {
    throw std::domain_error(
        "gaussian_emission_log_density: defined only for alpha=2, beta=0");
  }
  const double scale = std::exp(0.5 * x);
  const double sd = std::sqrt(2.0) * opts_.gamma * scale;
  const double z = (y - opts_.delta * scale) / sd;
  return normal_log_pdf(z) - std::log(sd);
}

}  // namespace abcsmc2::models
