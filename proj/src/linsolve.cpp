#include "krigmv/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"

namespace krigmv::linalg {

namespace {

constexpr const char* kModule = "linsolve";

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

std::optional<DenseMatrix> try_cholesky(const DenseMatrix& a, double shift) {
  const std::size_t n = a.dim();
  DenseMatrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j) + shift;
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t dim, double fill) : dim_(dim), data_(dim * dim, fill) {}

DenseMatrix::DenseMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim * dim) {
    throw UsageError(kModule, "matrix data has " + std::to_string(data_.size()) +
                                  " entries, expected " + std::to_string(dim * dim));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != dim_) throw UsageError(kModule, "vector length does not match matrix dimension");
  std::vector<double> y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const auto r = row(i);
    y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return y;
}

double DenseMatrix::norm1() const noexcept {
  double best = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

bool DenseMatrix::symmetric() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

LuFactorization::LuFactorization(DenseMatrix a, double max_condition) : lu_(std::move(a)) {
  const std::size_t n = lu_.dim();
  if (n == 0) throw UsageError(kModule, "cannot factor an empty matrix");
  const double anorm = lu_.norm1();
  if (!std::isfinite(anorm)) throw UsageError(kModule, "matrix has non-finite entries");

  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu_(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0) {
      throw SingularMatrixError(kModule, "zero pivot in column " + std::to_string(k),
                                std::numeric_limits<double>::infinity());
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
      std::swap(perm_[k], perm_[pivot]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu_(i, k) * inv;
      lu_(i, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
    }
  }

  condition_ = anorm * inverse_norm1_estimate();
  if (!(condition_ <= max_condition)) {
    throw SingularMatrixError(kModule,
                              "matrix is numerically singular (1-norm condition estimate " +
                                  format_double(condition_) + " > " + format_double(max_condition) + ")",
                              condition_);
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = lu_.dim();
  if (b.size() != n) throw UsageError(kModule, "right-hand side length does not match matrix dimension");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x[k];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lu_(i, k) * x[k];
    x[i] = s / lu_(i, i);
  }
  return x;
}

std::vector<double> LuFactorization::solve_transposed(std::span<const double> b) const {
  const std::size_t n = lu_.dim();
  if (b.size() != n) throw UsageError(kModule, "right-hand side length does not match matrix dimension");
  // A^T = U^T L^T P: forward with U^T, backward with unit L^T, then undo P.
  std::vector<double> w(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = w[i];
    for (std::size_t k = 0; k < i; ++k) s -= lu_(k, i) * w[k];
    w[i] = s / lu_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = w[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lu_(k, i) * w[k];
    w[i] = s;
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[perm_[i]] = w[i];
  return z;
}

double LuFactorization::inverse_norm1_estimate() const {
  const std::size_t n = lu_.dim();
  if (n == 1) return 1.0 / std::abs(lu_(0, 0));

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const auto y = solve(x);
    const double ynorm = norm1(y);
    if (!std::isfinite(ynorm)) return std::numeric_limits<double>::infinity();
    if (iter > 0 && ynorm <= estimate) break;
    estimate = ynorm;

    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    const auto z = solve_transposed(sign);
    std::size_t jmax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(z[i]) > std::abs(z[jmax])) jmax = i;
    }
    const double ztx = std::inner_product(z.begin(), z.end(), x.begin(), 0.0);
    if (iter > 0 && std::abs(z[jmax]) <= ztx) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[jmax] = 1.0;
  }

  // Higham's alternating test vector guards against the classic failure cases.
  std::vector<double> alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = 1.0 + static_cast<double>(i) / static_cast<double>(n - 1);
    alt[i] = (i % 2 == 0) ? mag : -mag;
  }
  const double alt_estimate = 2.0 * norm1(solve(alt)) / (3.0 * static_cast<double>(n));
  return std::max(estimate, alt_estimate);
}

std::vector<double> solve_pivoted(const DenseMatrix& a, std::span<const double> b) {
  return LuFactorization(a).solve(b);
}

DenseMatrix psd_factor(const DenseMatrix& a, double jitter) {
  if (!(jitter >= 0.0 && jitter <= 1e-10)) {
    throw UsageError(kModule, "jitter must lie in [0, 1e-10], got " + format_double(jitter));
  }
  if (a.dim() == 0) throw UsageError(kModule, "cannot factor an empty matrix");
  if (!a.symmetric()) throw UsageError(kModule, "psd_factor requires a symmetric matrix");
  if (auto l = try_cholesky(a, 0.0)) return *std::move(l);
  if (jitter > 0.0) {
    if (auto l = try_cholesky(a, jitter)) return *std::move(l);
  }
  throw IndefiniteMatrixError(kModule, "matrix of dimension " + std::to_string(a.dim()) +
                                           " is not positive semidefinite within jitter " +
                                           format_double(jitter));
}

}  // namespace krigmv::linalg
