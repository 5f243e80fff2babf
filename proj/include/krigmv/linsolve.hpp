#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace krigmv::linalg {

/// Square row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim, double fill = 0.0);
  DenseMatrix(std::size_t dim, std::vector<double> row_major);

  [[nodiscard]] static DenseMatrix identity(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * dim_ + col]; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data_).subspan(r * dim_, dim_);
  }

  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
  [[nodiscard]] double norm1() const noexcept;
  [[nodiscard]] bool symmetric() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Above this 1-norm condition estimate a matrix is treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// PA = LU with partial (row) pivoting. Factorization is deterministic, so a
/// stored factor reused for many right-hand sides gives exactly the bits of a
/// fresh factor-and-solve.
class LuFactorization {
 public:
  /// Throws SingularMatrixError on a zero pivot or when the condition
  /// estimate exceeds `max_condition`.
  explicit LuFactorization(DenseMatrix a, double max_condition = kMaxCondition);

  [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;
  [[nodiscard]] std::vector<double> solve_transposed(std::span<const double> b) const;

  [[nodiscard]] std::size_t dim() const noexcept { return lu_.dim(); }
  /// Estimate of ||A||_1 ||A^-1||_1 (Hager/Higham).
  [[nodiscard]] double condition_estimate() const noexcept { return condition_; }

 private:
  [[nodiscard]] double inverse_norm1_estimate() const;

  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  double condition_ = 0.0;
};

/// x with Ax = b via pivoted LU.
[[nodiscard]] std::vector<double> solve_pivoted(const DenseMatrix& a, std::span<const double> b);

/// Lower triangular L with L L^T = A + delta I, delta in {0, jitter}.
/// Throws IndefiniteMatrixError when A is not positive semidefinite within
/// the jitter, which may not exceed 1e-10.
[[nodiscard]] DenseMatrix psd_factor(const DenseMatrix& a, double jitter = 1e-10);

}  // namespace krigmv::linalg
