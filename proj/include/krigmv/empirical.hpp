#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace krigmv {

/// Experimental semivariogram for lags h = 0..n-1.
struct EmpiricalVariogram {
  std::vector<double> gamma;
  std::vector<std::size_t> pair_count;  // n - h
};

/// Largest lag d over which the semivariogram is non-decreasing from a
/// strictly positive lag-1 value; sigma2_hat = gamma[d].
struct MonotoneRange {
  std::size_t d = 0;
  double sigma2_hat = 0.0;
};

/// Covariance-based correlation estimates at lags 0..d. Ratios are reported
/// as computed; lags whose ratio leaves [0, 1] are listed, not clamped.
struct CovarianceCorrelation {
  std::vector<double> rho;
  std::vector<std::size_t> out_of_range_lags;
};

/// gamma(h) = 1/(2(n-h)) * sum_{j=1}^{n-h} (v_j - v_{j+h})^2.
[[nodiscard]] EmpiricalVariogram semivariogram(std::span<const double> data);

/// Throws DataError when gamma(1) == 0 (no admissible range).
[[nodiscard]] MonotoneRange monotone_range(const EmpiricalVariogram& v);

/// 1 - gamma(h)/sigma2_hat for h = 0..d.
[[nodiscard]] std::vector<double> variogram_correlation(const EmpiricalVariogram& v,
                                                        const MonotoneRange& r);

/// C(h) = 1/(n-h) sum v_j v_{j+h} - 1/(n-h)^2 sum v_j sum v_{j+h}, for 0 <= h <= n-2.
[[nodiscard]] double covariance(std::span<const double> data, std::size_t h);

/// C(h)/C(0) for h = 0..d; throws DataError when C(0) == 0.
[[nodiscard]] CovarianceCorrelation covariance_correlation(std::span<const double> data,
                                                           std::size_t d);

/// One row of the emitted variogram table. Correlation columns are empty
/// past the monotone range, covariance is empty at h = n-1.
struct VariogramRow {
  std::size_t h = 0;
  std::size_t pair_count = 0;
  double gamma = 0.0;
  std::optional<double> rho_variogram;
  std::optional<double> c;
  std::optional<double> rho_covariance;
};

struct VariogramTable {
  std::vector<VariogramRow> rows;
  std::optional<MonotoneRange> range;  // absent for degenerate data
};

[[nodiscard]] VariogramTable variogram_table(std::span<const double> data);

}  // namespace krigmv
