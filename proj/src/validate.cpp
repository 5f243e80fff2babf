#include "krigmv/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "krigmv/format.hpp"
#include "krigmv/kriging.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "validate";

// Nearest evaluation coordinate to j; halves round toward n+1.
std::size_t nearest_evaluation_coordinate(double j, std::size_t n) {
  const double rounded = std::ceil(j - 0.5);
  const double first = static_cast<double>(n + 1);
  return static_cast<std::size_t>(std::max(rounded, first));
}

CltAttempt standardize(const Window& window, std::size_t t, double j_star, const Moments& moments,
                       double residual, std::size_t coordinate) {
  CltAttempt attempt{t, std::nullopt, std::nullopt, {}};
  const auto observed = window.value_at(coordinate);
  if (!observed) {
    attempt.error = "j*=" + format_double(j_star) + " maps to coordinate " + std::to_string(coordinate) +
                    " beyond the series end N=" + std::to_string(window.total());
    return attempt;
  }
  CltSample s;
  s.t = t;
  s.j_star = j_star;
  s.m_hat = moments.m_hat;
  s.sigma2_hat = moments.sigma2_hat;
  s.observed_coordinate = coordinate;
  s.rounding_offset = std::abs(j_star - static_cast<double>(coordinate));
  s.observed = *observed;
  s.residual = residual;
  s.u = std::sqrt(static_cast<double>(window.n())) * (s.observed - s.m_hat) / std::sqrt(s.sigma2_hat);
  if (!std::isfinite(s.u)) {
    attempt.error = "standardized residual is not finite";
    return attempt;
  }
  attempt.sample = s;
  return attempt;
}

CltAttempt from_outcome(const Window& window, std::size_t t, const ConstraintOutcome& outcome) {
  if (!outcome.solved()) return {t, std::nullopt, std::nullopt, outcome.message};
  const auto& est = *outcome.estimate;
  return standardize(window, t, est.j_star, Moments{est.m_hat, est.sigma2_hat}, est.residual,
                     nearest_evaluation_coordinate(est.j_star, window.n()));
}

CltAttempt fixed_target(const Window& window, std::size_t t, const OrdinaryKriging& kriging) {
  const auto values = window.data().values();
  const double j = static_cast<double>(t);
  const auto solution = kriging.solve(values, j);
  const auto moments = estimate_moments(solution.weights, values);
  if (!moments.admissible()) {
    return {t, std::nullopt, std::nullopt,
            "invalid variance estimate: non-positive weighted second moment (" +
                format_double(moments.sigma2_hat) + ") at j=" + std::to_string(t)};
  }
  return standardize(window, t, j, moments, std::abs(solution.error_ratio - 1.0), t);
}

}  // namespace

const char* to_string(TargetMode mode) noexcept {
  return mode == TargetMode::root ? "root" : "fixed";
}

CorrelationModel ValidationPlan::model_for(std::size_t t) const {
  if (model) return *model;
  return CorrelationModel::frozen_power(static_cast<double>(t), beta);
}

void ValidationPlan::check(std::size_t window_n) const {
  if (n != window_n) {
    throw UsageError(kModule, "plan n=" + std::to_string(n) + " does not match data window length " +
                                  std::to_string(window_n));
  }
  if (t_first < n + 1) {
    throw UsageError(kModule, "t_start=" + std::to_string(t_first) + " must be >= n+1=" + std::to_string(n + 1));
  }
  if (t_last < t_first) {
    throw UsageError(kModule, "t_end=" + std::to_string(t_last) + " precedes t_start=" + std::to_string(t_first));
  }
  if (!model && !(beta > 0.0 && std::isfinite(beta))) {
    throw UsageError(kModule, "beta must be finite and > 0, got " + format_double(beta));
  }
  if (!(tol > 0.0)) throw UsageError(kModule, "tol must be > 0, got " + format_double(tol));
  if (j_max != 0.0 && !(j_max > static_cast<double>(n))) {
    throw UsageError(kModule, "j_max=" + format_double(j_max) + " must exceed n=" + std::to_string(n));
  }
}

std::size_t CltSequence::used() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(attempts.begin(), attempts.end(), [](const CltAttempt& a) { return a.sample.has_value(); }));
}

std::vector<double> CltSequence::u_values() const {
  std::vector<double> u;
  u.reserve(attempts.size());
  for (const auto& a : attempts) {
    if (a.sample) u.push_back(a.sample->u);
  }
  return u;
}

EmptySampleError::EmptySampleError(CltSequence sequence)
    : NumericalError(kModule, "no usable samples: all " + std::to_string(sequence.attempts.size()) +
                                  " frozen indices failed" +
                                  (sequence.attempts.empty() ? std::string()
                                                             : " (first: " + sequence.attempts.front().error + ")")),
      sequence_(std::move(sequence)) {}

CltSequence clt_sequence(const Window& window, const ValidationPlan& plan) {
  plan.check(window.n());
  const auto values = window.data().values();
  const std::size_t k = plan.k();

  ConstraintOptions options;
  options.j_max = plan.j_max;
  options.tol = plan.tol;

  // A fixed model override makes every t identical up to the observation, so
  // the deterministic solve is shared.
  std::optional<OrdinaryKriging> shared_kriging;
  std::optional<ConstraintOutcome> shared_outcome;
  std::optional<double> shared_gls;
  std::string shared_error;
  if (plan.model) {
    try {
      if (plan.mode == TargetMode::root) {
        shared_outcome = solve_constraint(*plan.model, values, options);
      } else {
        shared_kriging.emplace(*plan.model, window.n());
      }
    } catch (const Error& e) {
      shared_error = e.what();
    }
    try {
      shared_gls = gls_mean(*plan.model, values);
    } catch (const Error&) {
    }
  }

  auto attempt_for = [&](std::size_t t) -> CltAttempt {
    if (!shared_error.empty()) return {t, std::nullopt, std::nullopt, shared_error};
    CltAttempt attempt;
    try {
      if (plan.model) {
        attempt = plan.mode == TargetMode::root ? from_outcome(window, t, *shared_outcome)
                                                : fixed_target(window, t, *shared_kriging);
        attempt.gls_mean = shared_gls;
        return attempt;
      }
      const auto model = plan.model_for(t);
      if (plan.mode == TargetMode::root) {
        attempt = from_outcome(window, t, solve_constraint(model, values, options));
      } else {
        attempt = fixed_target(window, t, OrdinaryKriging(model, window.n()));
      }
    } catch (const Error& e) {
      return {t, std::nullopt, std::nullopt, e.what()};
    }
    try {
      attempt.gls_mean = gls_mean(plan.model_for(t), values);
    } catch (const Error&) {
    }
    return attempt;
  };

  CltSequence seq;
  seq.attempts.resize(k);
  unsigned threads = plan.threads != 0 ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, k));
  if (threads <= 1) {
    for (std::size_t i = 0; i < k; ++i) seq.attempts[i] = attempt_for(plan.t_first + i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < k; i = next++) seq.attempts[i] = attempt_for(plan.t_first + i);
      });
    }
  }

  if (seq.used() == 0) throw EmptySampleError(std::move(seq));
  return seq;
}

double standard_normal_cdf(double x) {
  if (std::isnan(x)) throw UsageError(kModule, "standard_normal_cdf of NaN");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double kolmogorov_q(double lambda) {
  if (std::isnan(lambda)) throw UsageError(kModule, "kolmogorov_q of NaN");
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Small lambda: the alternating series converges slowly, use the
    // equivalent theta-function form 1 - sqrt(2 pi)/lambda sum_odd exp(-m^2 pi^2 / (8 lambda^2)).
    const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int m = 1; m < 200; m += 2) {
      const double term = std::exp(c * m * m);
      sum += term;
      if (term < 1e-17 * sum || term == 0.0) break;
    }
    const double p = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int m = 1; m < 100000; ++m) {
    const double term = std::exp(a * m * m);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples) {
  if (samples.empty()) throw UsageError(kModule, "ks_test needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!std::isfinite(x)) throw UsageError(kModule, "ks_test sample is not finite");
  }
  std::sort(sorted.begin(), sorted.end());
  const double k = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = standard_normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / k - cdf, cdf - static_cast<double>(i) / k});
  }
  const double root_k = std::sqrt(k);
  const double lambda = (root_k + 0.12 + 0.11 / root_k) * d;
  return {d, sorted.size(), kolmogorov_q(lambda)};
}

}  // namespace krigmv
