#include "krigmv/kriging.hpp"

#include <cmath>
#include <string>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "kriging";

void check_target(double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw UsageError(kModule, "target coordinate must be finite and > 0, got " + format_double(target));
  }
}

linalg::DenseMatrix bordered_matrix(const CorrelationModel& model, std::size_t n) {
  if (n < 1) throw UsageError(kModule, "kriging needs at least one datum");
  linalg::DenseMatrix m(n + 1);
  std::vector<double> by_lag(n);
  for (std::size_t lag = 0; lag < n; ++lag) by_lag[lag] = model(static_cast<double>(lag));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) m(i, k) = by_lag[i > k ? i - k : k - i];
    m(i, n) = 1.0;
    m(n, i) = 1.0;
  }
  m(n, n) = 0.0;
  return m;
}

std::vector<double> target_rhs(const CorrelationModel& model, std::size_t n, double target) {
  check_target(target);
  std::vector<double> rhs(n + 1);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = model(std::abs(static_cast<double>(i + 1) - target));
  rhs[n] = 1.0;
  return rhs;
}

KrigingSolution finish(std::vector<double> x, std::span<const double> rhs, std::span<const double> values) {
  const std::size_t n = x.size() - 1;
  KrigingSolution s;
  s.multiplier = x[n];
  x.pop_back();
  s.weights = std::move(x);
  double explained = 0.0;
  double predictor = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    explained += s.weights[i] * rhs[i];
    if (!values.empty()) predictor += s.weights[i] * values[i];
  }
  s.predictor = predictor;
  s.error_ratio = 1.0 - explained - s.multiplier;
  return s;
}

void check_values(std::size_t n, std::span<const double> values) {
  if (values.size() != n) {
    throw UsageError(kModule, "data has " + std::to_string(values.size()) + " values, system expects " +
                                  std::to_string(n));
  }
}

linalg::LuFactorization factor(linalg::DenseMatrix m) {
  try {
    return linalg::LuFactorization(std::move(m));
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(kModule,
                              "kriging matrix is singular (inadmissible correlation model?): " +
                                  std::string(e.what()),
                              e.condition_estimate());
  }
}

}  // namespace

KrigingSystem assemble(const CorrelationModel& model, std::size_t n, double target) {
  check_target(target);
  return {bordered_matrix(model, n), target_rhs(model, n, target), target};
}

KrigingSolution solve(const KrigingSystem& system, std::span<const double> values) {
  const std::size_t dim = system.matrix.dim();
  if (dim < 2 || system.rhs.size() != dim) throw UsageError(kModule, "malformed kriging system");
  check_values(dim - 1, values);
  const auto lu = factor(system.matrix);
  return finish(lu.solve(system.rhs), system.rhs, values);
}

double error_ratio_at(const CorrelationModel& model, std::span<const double> values, double target) {
  return solve(assemble(model, values.size(), target), values).error_ratio;
}

OrdinaryKriging::OrdinaryKriging(const CorrelationModel& model, std::size_t n)
    : model_(model), n_(n), lu_(factor(bordered_matrix(model, n))) {}

std::vector<double> OrdinaryKriging::rhs(double target) const { return target_rhs(model_, n_, target); }

KrigingSolution OrdinaryKriging::solve(std::span<const double> values, double target) const {
  check_values(n_, values);
  const auto b = rhs(target);
  return finish(lu_.solve(b), b, values);
}

double OrdinaryKriging::error_ratio(double target) const {
  const auto b = rhs(target);
  return finish(lu_.solve(b), b, {}).error_ratio;
}

}  // namespace krigmv
