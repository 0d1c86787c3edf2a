#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "abcsmc2/model.hpp"

namespace abcsmc2::models {

/// Events of one interval [begin, end), strictly increasing. The padded view
/// used by the summaries prepends begin and appends end as imaginary events.
struct EventSeries {
  double begin = 0.0;
  double end = 0.0;
  std::vector<double> events;
};

/// (n, diff2, diff3, md): real-event count, sum of squared and cubed
/// consecutive gaps, and minimum gap, all over the padded series.
struct HawkesSummaries {
  double n = 0.0;
  double diff2 = 0.0;
  double diff3 = 0.0;
  double md = 0.0;

  std::array<double, 4> as_array() const { return {n, diff2, diff3, md}; }
};

HawkesSummaries hawkes_summaries(const EventSeries& padded);

/// Simulate a Hawkes interval by exact thinning. The conditional intensity is
///   lambda(tau) = theta0 * ell + theta1 * theta2 * sum_j exp(-theta2 (tau - v_j))
/// with the sum over history events (summarized by their decayed mass at the
/// interval start) and events already generated inside the interval. Between
/// events the intensity is non-increasing, so the value just after the last
/// event is a valid dominating rate, refreshed at every candidate.
EventSeries simulate_hawkes_interval_from_excitation(double excitation_at_start,
                                                     double ell, double theta0,
                                                     double theta1,
                                                     double theta2, double begin,
                                                     double end, RngStream& rng);

/// Convenience wrapper taking the raw event history (all events < begin).
EventSeries simulate_hawkes_interval(std::span<const double> history,
                                     double ell, double theta0, double theta1,
                                     double theta2, int t, RngStream& rng,
                                     double interval_length = 10.0);

/// Linear least-squares maps from the 4 summaries to (theta1, theta2, ell)
/// estimates, fitted once from a prior-predictive pilot.
struct RegressionMaps {
  // Row r holds the coefficients of estimator r on (1, n, diff2, diff3, md).
  Eigen::Matrix<double, 3, 5> coef = Eigen::Matrix<double, 3, 5>::Zero();

  Eigen::Vector3d apply(const HawkesSummaries& s) const {
    Eigen::Matrix<double, 5, 1> x;
    x << 1.0, s.n, s.diff2, s.diff3, s.md;
    return coef * x;
  }
};

struct HawkesPilotRow {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double ell = 0.0;
  HawkesSummaries summaries;
};

/// Least squares fit of the three estimator maps. Aborts (std::runtime_error)
/// when the design matrix is rank deficient or the pilot is too small (< 50).
RegressionMaps fit_regression_adjustment(std::span<const HawkesPilotRow> pilot);

/// Lognormal random-walk kernel result for the Hawkes parameters.
struct HawkesKernelResult {
  std::array<double, 2> proposal{0.0, 0.0};
  double log_ratio = 0.0;  // log(prop1 * prop2) - log(cur1 * cur2)
};

/// log(theta') ~ N(log(theta), c * cov_hat). Regularizes a non-PSD cov_hat
/// with a 1e-8 ridge (noted on stderr).
HawkesKernelResult hawkes_kernel(const std::array<double, 2>& theta, double c,
                                 const Eigen::Matrix2d& cov_hat,
                                 RngStream& rng);

struct HawkesOptions {
  double theta0 = 3.5;
  double sigma_l = 1.0;
  double phi = 0.9;
  double interval_length = 10.0;
  double kernel_c = 0.1;
  int pilot_size = 10000;
  std::uint64_t pilot_seed = 9001;
  // Truth used by the dataset simulator only.
  double true_theta1 = 0.5;
  double true_theta2 = 0.5;
};

/// Latent state carried per particle: the AR(1) level L_t and the decayed
/// mass of the observed history at the interval start,
/// excitation_t = sum_{v < 10(t-1)} exp(-theta2 (10(t-1) - v)).
/// The history component always comes from the observed series (never from
/// simulated emissions), so it enters the state as this scalar summary.
struct HawkesState {
  double level = 0.0;
  double excitation = 0.0;
};

/// Semi-parametric Hawkes process as a state space model over x_t =
/// (L_t, y_{1:t-1}). theta = (theta1, theta2), priors U(0.3, 0.7) each;
/// theta0, sigma_L, phi are known. The distance is the Euclidean distance
/// between regression-adjusted summary vectors; the maps are fitted from a
/// seeded prior-predictive pilot at construction.
class HawkesModel : public StateSpaceModel<HawkesState, EventSeries> {
 public:
  /// observed is the full observed series (needed to complete the history
  /// during propagation); the model keeps a copy.
  HawkesModel(const HawkesOptions& opts,
              ObservationSeries<EventSeries> observed);

  std::size_t param_dim() const override { return 2; }
  std::vector<std::string> param_names() const override {
    return {"theta1", "theta2"};
  }

  ParamVector prior_sample(RngStream& rng) const override;
  double prior_log_density(const ParamVector& theta) const override;
  HawkesState initial_proposal_sample(const ParamVector& theta,
                                      RngStream& rng) const override;
  HawkesState transition_proposal_sample(const HawkesState& prev,
                                         const ParamVector& theta, int t,
                                         RngStream& rng) const override;
  EventSeries emission_simulate(const HawkesState& state,
                                const ParamVector& theta, int t,
                                RngStream& rng) const override;
  double distance(const EventSeries& simulated, const EventSeries& observed,
                  int t) const override;
  ParamVector kernel_propose(const ParamVector& theta,
                             const CloudStatistics& stats,
                             RngStream& rng) const override;
  double kernel_log_ratio(const ParamVector& proposed,
                          const ParamVector& current) const override;
  ParamVector kernel_parameterization(const ParamVector& theta) const override;
  double state_summary(const HawkesState& state) const override;

  const HawkesOptions& options() const { return opts_; }
  const RegressionMaps& regression_maps() const { return maps_; }

  /// Decayed observed-history mass at the start of interval t, recomputed
  /// from scratch (used by invariants checking the particle states).
  double excitation_from_history(int t, double theta2) const;

 private:
  HawkesOptions opts_;
  ObservationSeries<EventSeries> observed_;
  RegressionMaps maps_;
};

/// Prior-predictive pilot generation shared by the model constructor and the
/// tests: single intervals [0, L) with empty history, theta from the prior
/// and ell from the stationary latent level.
std::vector<HawkesPilotRow> hawkes_pilot(const HawkesOptions& opts);

}  // namespace abcsmc2::models
