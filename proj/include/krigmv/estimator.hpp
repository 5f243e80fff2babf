#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krigmv/corrmodel.hpp"

namespace krigmv {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct Moments {
  double m_hat = 0.0;
  double sigma2_hat = 0.0;
  /// sigma2_hat > 0; negative weights can make the weighted second moment fall short.
  [[nodiscard]] bool admissible() const noexcept { return sigma2_hat > 0.0; }
};

struct EstimationResult {
  double j_star = 0.0;
  double m_hat = 0.0;
  double sigma2_hat = 0.0;
  std::vector<double> weights;
  /// |e(j_star) - 1| recomputed from a fresh system.
  double residual = 0.0;
  Bracket bracket;
};

enum class ConstraintStatus {
  solved,
  no_root,           // e(j) - 1 keeps one sign on the grid; only the asymptotic solution exists
  degenerate,        // e(j) = 1 everywhere on the grid
  invalid_variance,  // root found but the weighted second moment is not positive
};

[[nodiscard]] const char* to_string(ConstraintStatus status) noexcept;

struct ConstraintOptions {
  /// Upper end of the search interval; 0 selects 1000 * n.
  double j_max = 0.0;
  double tol = 1e-10;
  std::size_t grid_points = 512;
  /// Fill ConstraintOutcome::gls_mean when no root exists.
  bool gls_fallback = false;
};

struct ConstraintOutcome {
  ConstraintStatus status = ConstraintStatus::no_root;
  /// Present only when status == solved.
  std::optional<EstimationResult> estimate;
  /// Every sign-change bracket found on the grid, in increasing j.
  std::vector<Bracket> brackets;
  /// Root coordinate and moments there, also when the variance estimate was rejected.
  std::optional<double> j_root;
  std::optional<Moments> moments_at_root;
  /// Set on no_root when the caller opted into the GLS fallback.
  std::optional<double> gls_mean;
  std::string message;

  [[nodiscard]] bool solved() const noexcept { return status == ConstraintStatus::solved; }
};

/// Finds the smallest j in (n, j_max] with e(j) = 1: scans a geometric grid
/// for sign changes of e(j) - 1, then bisects. Throws only on usage errors
/// and singular kriging systems; every other outcome is reported in the
/// returned status.
[[nodiscard]] ConstraintOutcome solve_constraint(const CorrelationModel& model,
                                                 std::span<const double> data,
                                                 const ConstraintOptions& options = {});

/// m = w.v, sigma2 = w.v^2 - m^2.
[[nodiscard]] Moments estimate_moments(std::span<const double> weights, std::span<const double> data);

/// (1^T R^-1 v) / (1^T R^-1 1) with R(i, i') = rho(|i - i'|).
[[nodiscard]] double gls_mean(const CorrelationModel& model, std::span<const double> data);

}  // namespace krigmv
