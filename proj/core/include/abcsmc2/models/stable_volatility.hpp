#pragma once

#include "abcsmc2/model.hpp"
#include "abcsmc2/rng.hpp"

namespace abcsmc2::models {

/// sv_kernel result: the proposed AR coefficient and the kernel log-ratio
/// log K(proposal | current) - log K(current | proposal).
struct SvKernelResult {
  double proposal = 0.0;
  double log_ratio = 0.0;
};

/// Random-walk kernel on the probit-transformed AR coefficient:
/// xi = Phi^{-1}((theta+1)/2), xi' ~ N(xi, (c sigma_xi_hat)^2),
/// theta' = 2 Phi(xi') - 1. Proposals always land in (-1, 1).
SvKernelResult sv_kernel(double theta, double c, double sigma_xi_hat,
                         RngStream& rng);

struct StableVolOptions {
  // Known constants (config-overridable, not stated in the problem setting).
  double mu = 0.0;
  double sigma_h = 0.5;  // > 0
  double alpha = 1.8;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;
  double kernel_c = 0.1;
  // Truth used by the dataset simulator only.
  double true_theta = 0.7;
};

/// Stochastic volatility: x_t ~ N(mu + theta x_{t-1}, sigma_h^2),
/// y_t = exp(x_t / 2) v_t with stable noise v_t. The AR coefficient theta is
/// the single unknown, prior U(-1, 1); each y_t is a scalar and the distance
/// is plain |y_sim - y_obs| (no summary needed).
class StableVolModel : public StateSpaceModel<double, double> {
 public:
  explicit StableVolModel(const StableVolOptions& opts);

  std::size_t param_dim() const override { return 1; }
  std::vector<std::string> param_names() const override { return {"theta"}; }

  ParamVector prior_sample(RngStream& rng) const override;
  double prior_log_density(const ParamVector& theta) const override;
  double initial_proposal_sample(const ParamVector& theta,
                                 RngStream& rng) const override;
  double transition_proposal_sample(const double& prev,
                                    const ParamVector& theta, int t,
                                    RngStream& rng) const override;
  double emission_simulate(const double& state, const ParamVector& theta,
                           int t, RngStream& rng) const override;
  double distance(const double& simulated, const double& observed,
                  int t) const override;
  ParamVector kernel_propose(const ParamVector& theta,
                             const CloudStatistics& stats,
                             RngStream& rng) const override;
  double kernel_log_ratio(const ParamVector& proposed,
                          const ParamVector& current) const override;
  ParamVector kernel_parameterization(const ParamVector& theta) const override;
  double state_summary(const double& state) const override { return state; }

  const StableVolOptions& options() const { return opts_; }

  /// Exact emission log-density, defined only in the Gaussian special case
  /// (alpha = 2, beta = 0): y | x ~ N(delta e^{x/2}, 2 gamma^2 e^x).
  double gaussian_emission_log_density(double y, double x) const;
  bool gaussian_case() const;

 private:
  StableVolOptions opts_;
};

}  // namespace abcsmc2::models
