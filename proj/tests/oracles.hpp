// Independent reference computations used only by the tests. None of these
// share code paths with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Literal double loop of the printed semivariogram estimator.
inline std::vector<double> semivariogram(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t h = 0; h < n; ++h) {
    long double s = 0.0L;
    for (std::size_t j = 1; j + h <= n; ++j) {
      const long double d = static_cast<long double>(v[j - 1]) - v[j + h - 1];
      s += d * d;
    }
    g[h] = static_cast<double>(s / (2.0L * static_cast<long double>(n - h)));
  }
  return g;
}

// Printed covariance estimator, uncentered sums in long double.
inline double covariance(const std::vector<double>& v, std::size_t h) {
  const std::size_t m = v.size() - h;
  long double cross = 0.0L, head = 0.0L, tail = 0.0L;
  for (std::size_t j = 1; j <= m; ++j) {
    cross += static_cast<long double>(v[j - 1]) * v[j + h - 1];
    head += v[j - 1];
    tail += v[j + h - 1];
  }
  const long double ml = static_cast<long double>(m);
  return static_cast<double>(cross / ml - head * tail / (ml * ml));
}

// Laplace (cofactor) expansion along the first row.
inline double determinant(const Matrix& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double det = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(a[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    det += sign * a[0][col] * determinant(minor);
  }
  return det;
}

inline std::vector<double> cramer_solve(const Matrix& a, const std::vector<double>& b) {
  const double det = determinant(a);
  std::vector<double> x(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    Matrix ak = a;
    for (std::size_t r = 0; r < a.size(); ++r) ak[r][k] = b[r];
    x[k] = determinant(ak) / det;
  }
  return x;
}

struct KrigingReference {
  std::vector<double> weights;
  double multiplier;
  double predictor;
  double error_ratio;
};

// Ordinary kriging from scratch: builds the bordered system from rho and
// solves it by Cramer's rule. Error ratio from the quadratic form
// 1 - 2 w.r + w^T R w, not from the multiplier shortcut.
inline KrigingReference kriging(const std::function<double(double)>& rho, const std::vector<double>& v,
                                double target) {
  const std::size_t n = v.size();
  Matrix a(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> b(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) a[i][k] = rho(std::abs(static_cast<double>(i) - static_cast<double>(k)));
    a[i][n] = a[n][i] = 1.0;
    b[i] = rho(std::abs(static_cast<double>(i + 1) - target));
  }
  const auto x = cramer_solve(a, b);
  KrigingReference ref{{x.begin(), x.end() - 1}, x[n], 0.0, 0.0};
  double wr = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ref.predictor += ref.weights[i] * v[i];
    wr += ref.weights[i] * b[i];
    for (std::size_t k = 0; k < n; ++k) quad += ref.weights[i] * a[i][k] * ref.weights[k];
  }
  ref.error_ratio = 1.0 - 2.0 * wr + quad;
  return ref;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix.
inline std::vector<double> symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Composite Simpson integral of the normal density from 0 to x, plus 1/2.
inline double normal_cdf_quadrature(double x, int panels = 20000) {
  const double h = x / panels;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double s = pdf(0.0) + pdf(x);
  for (int i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * pdf(i * h);
  return 0.5 + s * h / 3.0;
}

// Kolmogorov tail by the raw alternating series with a fixed term count.
inline double kolmogorov_series(double lambda, int terms = 200) {
  double s = 0.0;
  for (int m = 1; m <= terms; ++m) s += ((m % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * m * m * lambda * lambda);
  return 2.0 * s;
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle
