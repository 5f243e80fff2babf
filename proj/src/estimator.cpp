#include "krigmv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"
#include "krigmv/kriging.hpp"
#include "krigmv/linsolve.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "estimator";

// Bisects f on [lo, hi] (opposite signs at the ends) down to adjacent doubles.
double bisect(const OrdinaryKriging& kriging, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = kriging.error_ratio(mid) - 1.0;
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double f_hi = kriging.error_ratio(hi) - 1.0;
  return std::abs(f_hi) < std::abs(f_lo) ? hi : lo;
}

}  // namespace

const char* to_string(ConstraintStatus status) noexcept {
  switch (status) {
    case ConstraintStatus::solved: return "solved";
    case ConstraintStatus::no_root: return "no_root";
    case ConstraintStatus::degenerate: return "degenerate";
    case ConstraintStatus::invalid_variance: return "invalid_variance";
  }
  return "unknown";
}

Moments estimate_moments(std::span<const double> weights, std::span<const double> data) {
  if (weights.size() != data.size() || data.empty()) {
    throw UsageError(kModule, "weights (" + std::to_string(weights.size()) + ") and data (" +
                                  std::to_string(data.size()) + ") must have equal nonzero length");
  }
  double m = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    m += weights[i] * data[i];
    total += weights[i];
  }
  // Equal to w.v^2 - m^2 term by term, written around m to avoid cancellation.
  double spread = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double dev = data[i] - m;
    spread += weights[i] * dev * dev;
  }
  return {m, spread + m * m * (1.0 - total)};
}

double gls_mean(const CorrelationModel& model, std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 1) throw UsageError(kModule, "gls_mean needs at least one datum");
  linalg::DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) r(i, k) = model(static_cast<double>(i > k ? i - k : k - i));
  }
  try {
    const linalg::LuFactorization lu(std::move(r));
    const auto rv = lu.solve(data);
    const auto r1 = lu.solve(std::vector<double>(n, 1.0));
    const double num = std::accumulate(rv.begin(), rv.end(), 0.0);
    const double den = std::accumulate(r1.begin(), r1.end(), 0.0);
    if (den == 0.0) throw NumericalError(kModule, "1^T R^-1 1 vanishes for model " + model.to_string());
    return num / den;
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(kModule, "correlation matrix singular for model " + model.to_string() +
                                           ": " + e.what(),
                              e.condition_estimate());
  }
}

ConstraintOutcome solve_constraint(const CorrelationModel& model, std::span<const double> data,
                                   const ConstraintOptions& options) {
  const std::size_t n = data.size();
  if (n < 1) throw UsageError(kModule, "solve_constraint needs at least one datum");
  const double nd = static_cast<double>(n);
  const double j_max = options.j_max == 0.0 ? 1000.0 * nd : options.j_max;
  if (!(j_max > nd) || !std::isfinite(j_max)) {
    throw UsageError(kModule, "j_max=" + format_double(j_max) + " must exceed n=" + std::to_string(n));
  }
  if (!(options.tol > 0.0)) throw UsageError(kModule, "tol must be > 0, got " + format_double(options.tol));
  if (options.grid_points < 2) throw UsageError(kModule, "grid_points must be >= 2");

  const OrdinaryKriging kriging(model, n);

  // Geometric probes n * (j_max/n)^(k/G), k = 1..G.
  const std::size_t g = options.grid_points;
  const double log_ratio = std::log(j_max / nd);
  std::vector<double> probes(g);
  std::vector<double> f(g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    probes[k] = k + 1 == g ? j_max : nd * std::exp(log_ratio * static_cast<double>(k + 1) / static_cast<double>(g));
    f[k] = kriging.error_ratio(probes[k]) - 1.0;
    worst = std::max(worst, std::abs(f[k]));
  }

  ConstraintOutcome out;
  if (worst <= options.tol) {
    out.status = ConstraintStatus::degenerate;
    out.message = "degenerate: constraint e(j) = 1 holds everywhere on (" + std::to_string(n) + ", " +
                  format_double(j_max) + "] for model " + model.to_string();
    return out;
  }

  std::optional<double> root;
  Bracket root_bracket;
  auto accept = [&](double j, Bracket b) {
    out.brackets.push_back(b);
    if (root) return;
    // Independent re-check from a freshly assembled system.
    const double r = std::abs(error_ratio_at(model, data, j) - 1.0);
    if (r <= options.tol) {
      root = j;
      root_bracket = b;
    }
  };

  double prev_j = nd;
  double prev_f = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < g; ++k) {
    if (f[k] == 0.0) {
      accept(probes[k], {probes[k], probes[k]});
    } else if (!std::isnan(prev_f) && prev_f != 0.0 && (prev_f < 0.0) != (f[k] < 0.0)) {
      accept(bisect(kriging, prev_j, probes[k], prev_f), {prev_j, probes[k]});
    }
    prev_j = probes[k];
    prev_f = f[k];
  }

  if (!root) {
    out.status = ConstraintStatus::no_root;
    out.message = out.brackets.empty()
                      ? "no non-asymptotic solution: e(j) - 1 keeps its sign on (" + std::to_string(n) +
                            ", " + format_double(j_max) + "]; asymptotic GLS applies"
                      : "no non-asymptotic solution: sign changes found but none converged to |e(j)-1| <= " +
                            format_double(options.tol);
    if (options.gls_fallback) out.gls_mean = gls_mean(model, data);
    return out;
  }

  out.j_root = *root;
  const auto solution = kriging.solve(data, *root);
  const auto moments = estimate_moments(solution.weights, data);
  out.moments_at_root = moments;
  if (!moments.admissible()) {
    out.status = ConstraintStatus::invalid_variance;
    out.message = "invalid variance estimate: non-positive weighted second moment (" +
                  format_double(moments.sigma2_hat) + ") at j*=" + format_double(*root);
    return out;
  }

  EstimationResult est;
  est.j_star = *root;
  est.m_hat = moments.m_hat;
  est.sigma2_hat = moments.sigma2_hat;
  est.weights = solution.weights;
  est.residual = std::abs(error_ratio_at(model, data, *root) - 1.0);
  est.bracket = root_bracket;
  out.status = ConstraintStatus::solved;
  out.estimate = std::move(est);
  return out;
}

}  // namespace krigmv
