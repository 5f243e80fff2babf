#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krigmv/corrmodel.hpp"
#include "krigmv/error.hpp"
#include "krigmv/estimator.hpp"
#include "krigmv/series.hpp"

namespace krigmv {

/// How the target coordinate of each frozen index t is chosen.
enum class TargetMode {
  root,   // solve e(j) = 1, observe the evaluation value nearest to j*
  fixed,  // use j = t directly and report |e(t) - 1| as the residual
};

[[nodiscard]] const char* to_string(TargetMode mode) noexcept;

struct ValidationPlan {
  std::size_t n = 0;
  std::size_t t_first = 0;
  std::size_t t_last = 0;
  double beta = kFrozenPowerBeta;
  double j_max = 0.0;  // 0 selects 1000 * n
  double tol = 1e-10;
  TargetMode mode = TargetMode::root;
  /// Replaces frozen_power(t, beta) for every t when set.
  std::optional<CorrelationModel> model;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  [[nodiscard]] std::size_t k() const noexcept { return t_last >= t_first ? t_last - t_first + 1 : 0; }
  [[nodiscard]] CorrelationModel model_for(std::size_t t) const;
  /// Throws UsageError unless n+1 <= t_first <= t_last and the solver settings are sane.
  void check(std::size_t window_n) const;
};

/// Standardized residual for one frozen index t.
struct CltSample {
  std::size_t t = 0;
  double j_star = 0.0;
  double m_hat = 0.0;
  double sigma2_hat = 0.0;
  /// Coordinate whose value was used as the observation.
  std::size_t observed_coordinate = 0;
  /// |j_star - observed_coordinate|
  double rounding_offset = 0.0;
  double observed = 0.0;
  /// |e(j_star) - 1|
  double residual = 0.0;
  /// sqrt(n) (observed - m_hat) / sqrt(sigma2_hat)
  double u = 0.0;
};

struct CltAttempt {
  std::size_t t = 0;
  std::optional<CltSample> sample;
  /// Asymptotic GLS mean under the model for t, when computable.
  std::optional<double> gls_mean;
  std::string error;  // empty when sample is present
};

struct CltSequence {
  std::vector<CltAttempt> attempts;

  [[nodiscard]] std::size_t used() const noexcept;
  [[nodiscard]] std::size_t failed() const noexcept { return attempts.size() - used(); }
  /// u of every usable sample in t order.
  [[nodiscard]] std::vector<double> u_values() const;
};

/// Thrown by clt_sequence when no t produced a usable sample; carries the
/// per-t failures for reporting.
class EmptySampleError : public NumericalError {
 public:
  explicit EmptySampleError(CltSequence sequence);
  [[nodiscard]] const CltSequence& sequence() const noexcept { return sequence_; }

 private:
  CltSequence sequence_;
};

struct KsResult {
  double d_stat = 0.0;
  std::size_t n_samples = 0;
  double p_value = 0.0;
};

/// Builds the frozen model for each t, solves for the target coordinate on
/// window.data() and standardizes the observed evaluation value. Failed t
/// are recorded and excluded. Output is in t order and independent of the
/// thread count.
[[nodiscard]] CltSequence clt_sequence(const Window& window, const ValidationPlan& plan);

/// Phi(x) for the standard normal.
[[nodiscard]] double standard_normal_cdf(double x);

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{m>=1} (-1)^(m-1) exp(-2 m^2 lambda^2).
[[nodiscard]] double kolmogorov_q(double lambda);

/// One-sample Kolmogorov-Smirnov test against N(0, 1), p-value from
/// Q((sqrt(k) + 0.12 + 0.11/sqrt(k)) D).
[[nodiscard]] KsResult ks_test(std::span<const double> samples);

}  // namespace krigmv
