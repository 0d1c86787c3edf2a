#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcsmc2/model.hpp"
#include "abcsmc2/parallel.hpp"
#include "abcsmc2/particle.hpp"
#include "abcsmc2/rng.hpp"

namespace abcsmc2 {

/// Per-timestep ABC acceptance radii. Append-only: entries are never
/// rewritten once calibrated, and rejuvenation recycles them verbatim.
struct ThresholdSchedule {
  std::vector<double> eps;
};

struct StepDiagnostics {
  int t = 0;
  double epsilon = 0.0;
  double ess = 0.0;  // ESS of the theta weights after the Z update, before any rejuvenation
  bool rejuvenated = false;
  double mh_accept_rate = std::numeric_limits<double>::quiet_NaN();
  double coverage_at_eps = 0.0;     // Z*u-weighted acceptance fraction at eps
  double coverage_below_eps = 0.0;  // same fraction at the largest observed distance < eps
  double wall_seconds = 0.0;
};

template <class S>
struct StateCloud {
  std::vector<S> states;
  std::vector<double> weights;  // normalized, or all zero for a dead cloud

  bool dead() const {
    for (double w : weights) {
      if (w > 0.0) return false;
    }
    return true;
  }
};

template <class S>
struct ThetaParticle {
  ParamVector theta;
  /// Theta-level weight used for calibration, resampling and ESS. Rescaled
  /// by the cloud maximum after every step (the scale lives in
  /// ThetaCloud::log_z_scale); reset to 1 by rejuvenation.
  double z = 1.0;
  /// Cumulative log ABC likelihood estimate from t = 1, kept across
  /// rejuvenations so Metropolis-Hastings compares full-horizon estimates.
  double log_z_cum = 0.0;
  StateCloud<S> states;
};

template <class S>
struct ThetaCloud {
  std::vector<ThetaParticle<S>> particles;
  ThresholdSchedule thresholds;
  int t = 0;                 // timesteps consumed
  double log_z_scale = 0.0;  // log of the cumulative rescale factored out of z
  std::vector<StepDiagnostics> diagnostics;

  /// Absolute theta weight Z_t^m (undoes the running rescale).
  double z_absolute(std::size_t m) const {
    return particles[m].z * std::exp(log_z_scale);
  }
};

/// Every theta particle's cumulative weight reached zero: the run cannot
/// continue. Remedies are a larger P_acc or larger N_y.
class TotalParticleDeath : public std::runtime_error {
 public:
  explicit TotalParticleDeath(const std::string& what)
      : std::runtime_error(what) {}
};

/// Smallest observed distance whose cumulative Z*u-weighted acceptance
/// fraction reaches p_acc. Sorts the records in place.
/// Throws TotalParticleDeath when the total record weight is zero.
double calibrate_threshold(std::vector<CalibrationRecord>& records,
                           double p_acc);

/// u * (1/N_y) * #{i : distances[i] <= eps}.
double abc_emission_weight(std::span<const double> distances, double eps,
                           double u);

template <class S>
bool check_degeneracy(const ThetaCloud<S>& cloud, const RunConfig& cfg) {
  std::vector<double> z(cloud.particles.size());
  for (std::size_t m = 0; m < z.size(); ++m) z[m] = cloud.particles[m].z;
  return ess(z) < cfg.ess_fraction * static_cast<double>(cfg.n_theta);
}

template <class S>
struct ConditionalFilterResult {
  double log_z = 0.0;  // -inf when the filter died
  StateCloud<S> states;
};

namespace detail {

// Key roles for stream derivation; values are arbitrary but fixed.
inline constexpr std::uint64_t kTagPrior = 0xA0;
inline constexpr std::uint64_t kTagAncestor = 0xA1;
inline constexpr std::uint64_t kTagPropagate = 0xA2;
inline constexpr std::uint64_t kTagEmit = 0xA3;
inline constexpr std::uint64_t kTagRejuvResample = 0xB0;
inline constexpr std::uint64_t kTagRejuvPropose = 0xB1;
inline constexpr std::uint64_t kTagRejuvAccept = 0xB2;
inline constexpr std::uint64_t kTagRejuvFilter = 0xB3;

inline std::size_t sample_index(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  const auto it =
      std::lower_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative.begin()),
      cumulative.size() - 1);
}

// Propagation and simulation results for one theta particle at one step.
template <class S>
struct StepBuffer {
  std::vector<S> proposals;      // N_x proposed states
  std::vector<double> u;         // N_x transition weight ratios
  std::vector<double> distances; // N_x * N_y, slot n occupies [n*N_y, (n+1)*N_y)
};

// Algorithm lines 1-9: ancestor resampling, propagation, N_y simulations and
// distances for one theta particle. salt_a/salt_b distinguish the main loop
// from rejuvenation filter reruns.
template <class S, class Y>
void propagate_and_simulate(const StateSpaceModel<S, Y>& model,
                            const RunConfig& cfg, const ParamVector& theta,
                            const StateCloud<S>* prev, int t, const Y& y_t,
                            std::uint64_t salt_a, std::uint64_t salt_b,
                            StepBuffer<S>& buf) {
  const std::size_t n_x = static_cast<std::size_t>(cfg.n_x);
  const std::size_t n_y = static_cast<std::size_t>(cfg.n_y);
  buf.proposals.resize(n_x);
  buf.u.resize(n_x);
  buf.distances.resize(n_x * n_y);

  std::vector<double> cumulative;
  if (t > 1) {
    cumulative.resize(n_x);
    double acc = 0.0;
    for (std::size_t n = 0; n < n_x; ++n) {
      acc += prev->weights[n];
      cumulative[n] = acc;
    }
  }
  const std::uint64_t tu = static_cast<std::uint64_t>(t);
  for (std::size_t n = 0; n < n_x; ++n) {
    S proposed;
    double u_ratio;
    if (t == 1) {
      RngStream init_rng = RngStream::keyed(
          {cfg.seed, kTagPropagate, salt_a, salt_b, tu, n});
      proposed = model.initial_proposal_sample(theta, init_rng);
      u_ratio = model.transition_weight_ratio(proposed, proposed, theta, 1);
    } else {
      RngStream anc_rng = RngStream::keyed(
          {cfg.seed, kTagAncestor, salt_a, salt_b, tu, n});
      const std::size_t a = sample_index(cumulative, anc_rng.uniform01());
      RngStream prop_rng = RngStream::keyed(
          {cfg.seed, kTagPropagate, salt_a, salt_b, tu, n});
      proposed =
          model.transition_proposal_sample(prev->states[a], theta, t, prop_rng);
      u_ratio =
          model.transition_weight_ratio(proposed, prev->states[a], theta, t);
    }
    buf.proposals[n] = proposed;
    buf.u[n] = u_ratio;
    for (std::size_t i = 0; i < n_y; ++i) {
      RngStream emit_rng = RngStream::keyed(
          {cfg.seed, kTagEmit, salt_a, salt_b, tu, n, i});
      const Y simulated = model.emission_simulate(proposed, theta, t, emit_rng);
      buf.distances[n * n_y + i] = model.distance(simulated, y_t, t);
    }
  }
}

// Algorithm lines 13-21: emission weights, state-weight normalization and the
// likelihood increment p_hat for one theta particle, given this step's eps.
template <class S>
double weight_given_eps(const StepBuffer<S>& buf, double eps, int n_y,
                        StateCloud<S>& out) {
  const std::size_t n_x = buf.proposals.size();
  const std::size_t ny = static_cast<std::size_t>(n_y);
  std::vector<double> w(n_x);
  double total = 0.0;
  for (std::size_t n = 0; n < n_x; ++n) {
    w[n] = abc_emission_weight(
        std::span<const double>(buf.distances.data() + n * ny, ny), eps,
        buf.u[n]);
    total += w[n];
  }
  out.states = buf.proposals;
  auto [normalized, tot] = normalize(w);
  out.weights = std::move(normalized);
  (void)tot;
  return total / static_cast<double>(n_x);  // p_hat
}

struct CoverageFractions {
  double at_eps = 0.0;
  double below_eps = 0.0;
};

inline CoverageFractions coverage_at(
    std::span<const CalibrationRecord> records, double eps) {
  double total = 0.0, at = 0.0, below = 0.0;
  for (const auto& r : records) {
    total += r.weight;
    if (r.distance <= eps) at += r.weight;
    if (r.distance < eps) below += r.weight;
  }
  CoverageFractions out;
  if (total > 0.0) {
    out.at_eps = at / total;
    out.below_eps = below / total;
  }
  return out;
}

}  // namespace detail

/// ABC particle filter for a single theta with a fixed, previously calibrated
/// threshold schedule (no recalibration). Returns the cumulative log
/// likelihood estimate (-inf if any step's p_hat reached zero, in which case
/// the filter short-circuits) and the final state cloud.
/// salt_a/salt_b key this invocation's random streams.
template <class S, class Y>
ConditionalFilterResult<S> run_conditional_filter(
    const ParamVector& theta, std::span<const double> thresholds,
    std::span<const Y> observations, const StateSpaceModel<S, Y>& model,
    const RunConfig& cfg, std::uint64_t salt_a, std::uint64_t salt_b) {
  if (thresholds.size() > observations.size()) {
    throw std::invalid_argument(
        "run_conditional_filter: more thresholds than observations");
  }
  ConditionalFilterResult<S> result;
  result.log_z = 0.0;
  detail::StepBuffer<S> buf;
  StateCloud<S> current;
  for (std::size_t s = 0; s < thresholds.size(); ++s) {
    const int t = static_cast<int>(s) + 1;
    detail::propagate_and_simulate(model, cfg, theta,
                                   t == 1 ? nullptr : &current, t,
                                   observations[s], salt_a, salt_b, buf);
    StateCloud<S> next;
    const double p_hat =
        detail::weight_given_eps(buf, thresholds[s], cfg.n_y, next);
    current = std::move(next);
    if (p_hat <= 0.0) {
      result.log_z = -std::numeric_limits<double>::infinity();
      result.states = std::move(current);  // dead cloud, weights all zero
      return result;
    }
    result.log_z += std::log(p_hat);
  }
  result.states = std::move(current);
  return result;
}

template <class S, class Y>
double rejuvenate(ThetaCloud<S>& cloud, const StateSpaceModel<S, Y>& model,
                  const RunConfig& cfg, std::span<const Y> observations,
                  int threads = 1);

namespace detail {

// The body shared by init_step and update_step: one self-calibrated update.
template <class S, class Y>
void advance_cloud(ThetaCloud<S>& cloud, const StateSpaceModel<S, Y>& model,
                   const RunConfig& cfg, std::span<const Y> observations,
                   std::optional<double> fixed_eps, int threads) {
  const auto start_time = std::chrono::steady_clock::now();
  const int t = cloud.t + 1;
  if (observations.size() < static_cast<std::size_t>(t)) {
    throw std::invalid_argument("advance_cloud: observation prefix too short");
  }
  const Y& y_t = observations[static_cast<std::size_t>(t) - 1];
  const std::size_t n_theta = cloud.particles.size();
  const std::size_t n_y = static_cast<std::size_t>(cfg.n_y);

  // Lines 1-9 for every live particle, in parallel. Dead particles skip
  // propagation and simulation entirely: they carry zero mass everywhere.
  std::vector<detail::StepBuffer<S>> buffers(n_theta);
  std::vector<char> live(n_theta, 0);
  parallel_for(n_theta, threads, [&](std::size_t m) {
    auto& particle = cloud.particles[m];
    if (t > 1 && particle.z <= 0.0) return;
    live[m] = 1;
    detail::propagate_and_simulate(model, cfg, particle.theta,
                                   t == 1 ? nullptr : &particle.states, t, y_t,
                                   /*salt_a=*/0, /*salt_b=*/m, buffers[m]);
  });

  // Calibration gathers every simulation's (distance, Z*u) mass. The theta
  // weight entering the records is the pre-update Z_{t-1}^m.
  double eps;
  detail::CoverageFractions coverage;
  {
    std::vector<CalibrationRecord> records;
    std::size_t n_live = 0;
    for (std::size_t m = 0; m < n_theta; ++m) n_live += live[m] ? 1 : 0;
    records.reserve(n_live * static_cast<std::size_t>(cfg.n_x) * n_y);
    for (std::size_t m = 0; m < n_theta; ++m) {
      if (!live[m]) continue;
      const double z_prev = (t == 1) ? 1.0 : cloud.particles[m].z;
      const auto& buf = buffers[m];
      for (std::size_t n = 0; n < buf.proposals.size(); ++n) {
        const double mass = z_prev * buf.u[n];
        for (std::size_t i = 0; i < n_y; ++i) {
          records.push_back({buf.distances[n * n_y + i], mass});
        }
      }
    }
    if (fixed_eps) {
      eps = *fixed_eps;
      coverage = detail::coverage_at(records, eps);
    } else {
      eps = calibrate_threshold(records, cfg.p_acc);
      coverage = detail::coverage_at(records, eps);
    }
  }

  // Lines 13-21: weight, normalize, update Z.
  parallel_for(n_theta, threads, [&](std::size_t m) {
    auto& particle = cloud.particles[m];
    if (!live[m]) {
      particle.states.weights.assign(particle.states.weights.size(), 0.0);
      return;
    }
    StateCloud<S> next;
    const double p_hat = detail::weight_given_eps(buffers[m], eps, cfg.n_y, next);
    particle.states = std::move(next);
    particle.z *= p_hat;
    particle.log_z_cum += (p_hat > 0.0)
                              ? std::log(p_hat)
                              : -std::numeric_limits<double>::infinity();
  });
  buffers.clear();
  buffers.shrink_to_fit();

  double z_max = 0.0;
  for (const auto& p : cloud.particles) z_max = std::max(z_max, p.z);
  if (z_max <= 0.0) {
    throw TotalParticleDeath(
        "all theta particles died at t=" + std::to_string(t) +
        ": every cumulative weight Z reached zero; increase p_acc or n_y");
  }
  for (auto& p : cloud.particles) p.z /= z_max;
  cloud.log_z_scale += std::log(z_max);

  cloud.thresholds.eps.push_back(eps);
  cloud.t = t;

  StepDiagnostics diag;
  diag.t = t;
  diag.epsilon = eps;
  {
    std::vector<double> z(n_theta);
    for (std::size_t m = 0; m < n_theta; ++m) z[m] = cloud.particles[m].z;
    diag.ess = ess(z);
  }
  diag.coverage_at_eps = coverage.at_eps;
  diag.coverage_below_eps = coverage.below_eps;

  if (diag.ess < cfg.ess_fraction * static_cast<double>(cfg.n_theta)) {
    diag.mh_accept_rate = rejuvenate(
        cloud, model, cfg, observations.first(static_cast<std::size_t>(t)),
        threads);
    diag.rejuvenated = true;
  }

  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_time)
          .count();
  cloud.diagnostics.push_back(diag);
}

}  // namespace detail

/// First update (t = 1): draw N_theta parameters from the prior, start each
/// particle filter, calibrate eps_1 and set the initial weights.
/// fixed_eps bypasses calibration (thresholds supplied a priori).
template <class S, class Y>
ThetaCloud<S> init_step(const StateSpaceModel<S, Y>& model,
                        const RunConfig& cfg, const Y& y_1,
                        std::optional<double> fixed_eps = std::nullopt,
                        int threads = 1) {
  {
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
      throw std::invalid_argument("init_step: invalid config: " + violations.front());
    }
  }
  ThetaCloud<S> cloud;
  cloud.particles.resize(static_cast<std::size_t>(cfg.n_theta));
  for (std::size_t m = 0; m < cloud.particles.size(); ++m) {
    RngStream prior_rng = RngStream::keyed({cfg.seed, detail::kTagPrior, m});
    cloud.particles[m].theta = model.prior_sample(prior_rng);
    cloud.particles[m].z = 1.0;
    cloud.particles[m].log_z_cum = 0.0;
  }
  const Y observations[1] = {y_1};
  detail::advance_cloud(cloud, model, cfg,
                        std::span<const Y>(observations, 1), fixed_eps,
                        threads);
  return cloud;
}

/// One self-calibrated update consuming y_t = observations[cloud.t]. The full
/// prefix is required because a triggered rejuvenation reruns filters from
/// t = 1 with the recycled thresholds.
template <class S, class Y>
void update_step(ThetaCloud<S>& cloud, const StateSpaceModel<S, Y>& model,
                 const RunConfig& cfg, std::span<const Y> observations,
                 std::optional<double> fixed_eps = std::nullopt,
                 int threads = 1) {
  if (cloud.t < 1) throw std::logic_error("update_step: call init_step first");
  detail::advance_cloud(cloud, model, cfg, observations, fixed_eps, threads);
}

/// Weighted mean and covariance of the cloud's parameters on the model's
/// kernel parameterization scale, weighted by z.
template <class S, class Y>
CloudStatistics cloud_statistics(const ThetaCloud<S>& cloud,
                                 const StateSpaceModel<S, Y>& model) {
  const std::size_t n = cloud.particles.size();
  std::vector<ParamVector> mapped(n);
  double total = 0.0;
  std::size_t dim = 0;
  for (std::size_t m = 0; m < n; ++m) {
    mapped[m] = model.kernel_parameterization(cloud.particles[m].theta);
    dim = mapped[m].size();
    total += cloud.particles[m].z;
  }
  CloudStatistics stats;
  stats.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  stats.covariance =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                            static_cast<Eigen::Index>(dim));
  if (total <= 0.0) return stats;
  for (std::size_t m = 0; m < n; ++m) {
    const double w = cloud.particles[m].z / total;
    for (std::size_t j = 0; j < dim; ++j) {
      stats.mean[static_cast<Eigen::Index>(j)] += w * mapped[m][j];
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    const double w = cloud.particles[m].z / total;
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        stats.covariance(static_cast<Eigen::Index>(j),
                         static_cast<Eigen::Index>(k)) +=
            w * (mapped[m][j] - stats.mean[static_cast<Eigen::Index>(j)]) *
            (mapped[m][k] - stats.mean[static_cast<Eigen::Index>(k)]);
      }
    }
  }
  return stats;
}

/// Resample-move refresh of the theta particles (steps 1-4 of the
/// rejuvenation procedure): multinomial resampling by Z, kernel proposals,
/// independent conditional filters with the recycled thresholds, and a
/// Metropolis-Hastings accept/reject of the full replacement tuple. All Z are
/// set to 1 afterwards, so the post-condition ESS equals N_theta exactly.
/// Returns the MH acceptance rate.
template <class S, class Y>
double rejuvenate(ThetaCloud<S>& cloud, const StateSpaceModel<S, Y>& model,
                  const RunConfig& cfg, std::span<const Y> observations,
                  int threads) {
  const int t = cloud.t;
  const std::size_t n_theta = cloud.particles.size();
  if (observations.size() < static_cast<std::size_t>(t)) {
    throw std::invalid_argument("rejuvenate: observation prefix too short");
  }

  // Kernel tuning statistics come from the weighted cloud before resampling.
  const CloudStatistics stats = cloud_statistics(cloud, model);

  std::vector<double> z(n_theta);
  for (std::size_t m = 0; m < n_theta; ++m) z[m] = cloud.particles[m].z;
  RngStream resample_rng = RngStream::keyed(
      {cfg.seed, detail::kTagRejuvResample, static_cast<std::uint64_t>(t)});
  const auto indices = multinomial_resample(z, n_theta, resample_rng);
  std::vector<ThetaParticle<S>> resampled(n_theta);
  for (std::size_t m = 0; m < n_theta; ++m) {
    resampled[m] = cloud.particles[indices[m]];
  }
  cloud.particles = std::move(resampled);

  std::vector<char> accepted(n_theta, 0);
  const std::uint64_t tu = static_cast<std::uint64_t>(t);
  parallel_for(n_theta, threads, [&](std::size_t m) {
    auto& particle = cloud.particles[m];
    RngStream propose_rng =
        RngStream::keyed({cfg.seed, detail::kTagRejuvPropose, tu, m});
    const ParamVector proposal =
        model.kernel_propose(particle.theta, stats, propose_rng);
    const double proposal_prior = model.prior_log_density(proposal);
    if (!std::isfinite(proposal_prior)) {
      particle.z = 1.0;  // auto-reject: no filter run
      return;
    }
    const auto fresh = run_conditional_filter<S, Y>(
        proposal, cloud.thresholds.eps, observations.first(static_cast<std::size_t>(t)),
        model, cfg,
        /*salt_a=*/detail::kTagRejuvFilter + (tu << 8), /*salt_b=*/m);
    const double log_accept = proposal_prior -
                              model.prior_log_density(particle.theta) +
                              fresh.log_z - particle.log_z_cum +
                              model.kernel_log_ratio(proposal, particle.theta);
    RngStream accept_rng =
        RngStream::keyed({cfg.seed, detail::kTagRejuvAccept, tu, m});
    if (std::log(accept_rng.uniform01()) < log_accept) {
      particle.theta = proposal;
      particle.log_z_cum = fresh.log_z;
      particle.states = fresh.states;
      accepted[m] = 1;
    }
    particle.z = 1.0;
  });
  cloud.log_z_scale = 0.0;

  std::size_t n_accepted = 0;
  for (char a : accepted) n_accepted += a ? 1 : 0;
  return static_cast<double>(n_accepted) / static_cast<double>(n_theta);
}

/// Weighted quantile of the model's state summary over all (m, n) particles,
/// marginalizing theta with weight Z^m * W^{m,n}.
template <class S, class Y>
double filtering_quantile(const ThetaCloud<S>& cloud,
                          const StateSpaceModel<S, Y>& model, double q) {
  std::vector<double> values;
  std::vector<double> weights;
  values.reserve(cloud.particles.size() * 16);
  weights.reserve(cloud.particles.size() * 16);
  for (const auto& particle : cloud.particles) {
    if (particle.z <= 0.0) continue;
    for (std::size_t n = 0; n < particle.states.states.size(); ++n) {
      const double w = particle.z * particle.states.weights[n];
      if (w <= 0.0) continue;
      values.push_back(model.state_summary(particle.states.states[n]));
      weights.push_back(w);
    }
  }
  return weighted_quantile(values, weights, q);
}

/// Weighted quantile of one theta component under the z weights.
template <class S>
double theta_component_quantile(const ThetaCloud<S>& cloud,
                                std::size_t component, double q) {
  std::vector<double> values(cloud.particles.size());
  std::vector<double> weights(cloud.particles.size());
  for (std::size_t m = 0; m < cloud.particles.size(); ++m) {
    values[m] = cloud.particles[m].theta[component];
    weights[m] = cloud.particles[m].z;
  }
  return weighted_quantile(values, weights, q);
}

/// Weighted mean of one theta component under the z weights.
template <class S>
double theta_component_mean(const ThetaCloud<S>& cloud, std::size_t component) {
  double total = 0.0, acc = 0.0;
  for (const auto& p : cloud.particles) {
    total += p.z;
    acc += p.z * p.theta[component];
  }
  return acc / total;
}

}  // namespace abcsmc2
