#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "abcsmc2/rng.hpp"

namespace abcsmc2 {

using ParamVector = std::vector<double>;

/// Weighted summary of the current theta cloud, computed on the model's
/// working scale (see StateSpaceModel::kernel_parameterization). Handed to
/// rejuvenation kernels so they can tune their proposal spread.
struct CloudStatistics {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // MLE form (weights normalized, no n-1 factor)
};

/// Capability record a model author implements. All randomness flows through
/// the explicitly passed stream, and implementations must be safe for
/// concurrent read-only use across particles.
///
/// S is the latent state type, Y the per-timestep observation type.
/// Timesteps are 1-based throughout.
template <class S, class Y>
class StateSpaceModel {
 public:
  virtual ~StateSpaceModel() = default;

  virtual std::size_t param_dim() const = 0;
  virtual std::vector<std::string> param_names() const = 0;

  virtual ParamVector prior_sample(RngStream& rng) const = 0;
  virtual double prior_log_density(const ParamVector& theta) const = 0;

  /// q_1: initial state proposal.
  virtual S initial_proposal_sample(const ParamVector& theta,
                                    RngStream& rng) const = 0;

  /// q_t, t >= 2: state transition proposal.
  virtual S transition_proposal_sample(const S& prev, const ParamVector& theta,
                                       int t, RngStream& rng) const = 0;

  /// u_t = p(x_t | x_{t-1}, theta) / q_t(x_t | x_{t-1}, theta); for t = 1 the
  /// ratio is prior-over-proposal. Defaults to 1 (bootstrap proposals).
  virtual double transition_weight_ratio(const S& proposed, const S& prev,
                                         const ParamVector& theta,
                                         int t) const {
    (void)proposed;
    (void)prev;
    (void)theta;
    (void)t;
    return 1.0;
  }

  /// Draw one synthetic observation from the emission distribution.
  virtual Y emission_simulate(const S& state, const ParamVector& theta, int t,
                              RngStream& rng) const = 0;

  /// Distance between a simulated and the observed dataset at time t
  /// (includes any summary mapping). Non-negative.
  virtual double distance(const Y& simulated, const Y& observed,
                          int t) const = 0;

  /// Rejuvenation kernel K_t: propose a new parameter near theta.
  virtual ParamVector kernel_propose(const ParamVector& theta,
                                     const CloudStatistics& stats,
                                     RngStream& rng) const = 0;

  /// log K_t(proposed | current) - log K_t(current | proposed), supplied by
  /// the model as one quantity (closed forms exist even when the kernel
  /// densities individually do not).
  virtual double kernel_log_ratio(const ParamVector& proposed,
                                  const ParamVector& current) const = 0;

  /// Map theta onto the scale in which the kernel is tuned (identity unless
  /// the kernel random-walks a transformed variable).
  virtual ParamVector kernel_parameterization(const ParamVector& theta) const {
    return theta;
  }

  /// Scalar tracked by the filtering output (the quantity whose posterior
  /// quantiles go into filtering.csv).
  virtual double state_summary(const S& state) const = 0;
};

/// Run configuration shared by every engine entry point.
struct RunConfig {
  int n_theta = 0;            // N_theta >= 1
  int n_x = 0;                // N_x >= 1
  int n_y = 0;                // N_y >= 1
  double p_acc = 0.0;         // target acceptance probability in (0, 1]
  double ess_fraction = 0.0;  // degeneracy threshold as a fraction of N_theta
  std::uint64_t seed = 0;
  int horizon = 0;            // T >= 1
};

/// Returns human-readable violations; empty means the config is valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// Observations indexed t = 1..T (element 0 is t = 1).
template <class Y>
using ObservationSeries = std::vector<Y>;

}  // namespace abcsmc2
