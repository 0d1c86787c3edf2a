#include "abcsmc2/models/skew_normal_ssm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "abcsmc2/distributions.hpp"
#include "abcsmc2/models/kernel_util.hpp"

namespace abcsmc2::models {

namespace {
constexpr double kSigmaLo = 0.1, kSigmaHi = 0.5;
constexpr double kGammaLo = 0.2, kGammaHi = 4.0;
}  // namespace

std::array<double, 3> skew_ssm_summaries(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::domain_error("skew_ssm_summaries: need >= 2 values");
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
  if (m2 <= 0.0) throw std::domain_error("skew_ssm_summaries: zero variance");
  const double sd =
      std::sqrt(m2 * static_cast<double>(n) / static_cast<double>(n - 1));
  return {mean, sd, m3 / std::pow(m2, 1.5)};
}

SkewNormalSsm::SkewNormalSsm(const SkewNormalOptions& opts) : opts_(opts) {
  if (opts_.obs_per_step < 2) {
    throw std::invalid_argument("SkewNormalSsm: obs_per_step must be >= 2");
  }
  // Summary weights: reciprocal standard deviation of each summary over a
  // prior-predictive pilot (theta from the prior, state from N(0,1)).
  const int n_pilot = opts_.pilot_size;
  std::array<double, 3> acc{0, 0, 0}, acc2{0, 0, 0};
  std::vector<double> sample(static_cast<std::size_t>(opts_.obs_per_step));
  for (int r = 0; r < n_pilot; ++r) {
    RngStream rng = RngStream::keyed(
        {opts_.pilot_seed, static_cast<std::uint64_t>(StreamTag::pilot),
         static_cast<std::uint64_t>(r)});
    const ParamVector theta = prior_sample(rng);
    const double x = rng.normal();
    const SkewNormalParams p{x, theta[0], theta[1]};
    for (auto& v : sample) v = sample_skew_normal(p, rng);
    const auto s = skew_ssm_summaries(sample);
    for (int k = 0; k < 3; ++k) {
      acc[k] += s[k];
      acc2[k] += s[k] * s[k];
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = acc[k] / n_pilot;
    const double var = acc2[k] / n_pilot - mean * mean;
    weights_[k] = 1.0 / std::sqrt(var);
  }
}

ParamVector SkewNormalSsm::prior_sample(RngStream& rng) const {
  return {kSigmaLo + (kSigmaHi - kSigmaLo) * rng.uniform01(),
          kGammaLo + (kGammaHi - kGammaLo) * rng.uniform01()};
}

double SkewNormalSsm::prior_log_density(const ParamVector& theta) const {
  if (theta[0] < kSigmaLo || theta[0] > kSigmaHi || theta[1] < kGammaLo ||
      theta[1] > kGammaHi) {
    return -std::numeric_limits<double>::infinity();
  }
  return -std::log((kSigmaHi - kSigmaLo) * (kGammaHi - kGammaLo));
}

double SkewNormalSsm::initial_proposal_sample(const ParamVector&,
                                              RngStream& rng) const {
  return rng.normal();
}

double SkewNormalSsm::transition_proposal_sample(const double& prev,
                                                 const ParamVector&, int,
                                                 RngStream& rng) const {
  return prev + rng.normal();
}

std::vector<double> SkewNormalSsm::emission_simulate(const double& state,
                                                     const ParamVector& theta,
                                                     int,
                                                     RngStream& rng) const {
  std::vector<double> out(static_cast<std::size_t>(opts_.obs_per_step));
  const SkewNormalParams p{state, theta[0], theta[1]};
  for (auto& v : out) v = sample_skew_normal(p, rng);
  return out;
}

double SkewNormalSsm::distance(const std::vector<double>& simulated,
                               const std::vector<double>& observed,
                               int) const {
  const auto s_sim = skew_ssm_summaries(simulated);
  const auto s_obs = skew_ssm_summaries(observed);
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = s_sim[k] - s_obs[k];
    acc += weights_[k] * d * d;
  }
  return std::sqrt(acc);
}

ParamVector SkewNormalSsm::kernel_propose(const ParamVector& theta,
                                          const CloudStatistics& stats,
                                          RngStream& rng) const {
  const Eigen::MatrixXd chol =
      safe_cholesky(opts_.kernel_c * stats.covariance, nullptr);
  const Eigen::Vector2d step =
      chol * Eigen::Vector2d(rng.normal(), rng.normal());
  return {theta[0] + step[0], theta[1] + step[1]};
}

double SkewNormalSsm::kernel_log_ratio(const ParamVector&,
                                       const ParamVector&) const {
  return 0.0;  // symmetric random walk
}

}  // namespace abcsmc2::models
