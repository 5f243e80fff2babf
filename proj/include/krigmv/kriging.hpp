#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "krigmv/corrmodel.hpp"
#include "krigmv/linsolve.hpp"

namespace krigmv {

/// Ordinary-kriging system in correlation form for data at coordinates 1..n:
///
///   [ R   1 ] [ w  ]   [ r ]
///   [ 1^T 0 ] [ mu ] = [ 1 ]
///
/// with R(i, i') = rho(|i - i'|) and r(i) = rho(|i - target|).
struct KrigingSystem {
  linalg::DenseMatrix matrix;
  std::vector<double> rhs;
  double target = 0.0;
};

struct KrigingSolution {
  std::vector<double> weights;
  /// Lagrange multiplier divided by the process variance.
  double multiplier = 0.0;
  /// sum_i w_i v_i
  double predictor = 0.0;
  /// Prediction-error variance over the process variance:
  /// 1 - sum_i w_i r_i - multiplier.
  double error_ratio = 0.0;
};

[[nodiscard]] KrigingSystem assemble(const CorrelationModel& model, std::size_t n, double target);

/// Factors and solves the system; `values` are the n data values.
/// Throws SingularMatrixError for inadmissible models.
[[nodiscard]] KrigingSolution solve(const KrigingSystem& system, std::span<const double> values);

[[nodiscard]] double error_ratio_at(const CorrelationModel& model, std::span<const double> values,
                                    double target);

/// Kriging for a fixed model and data size with the bordered matrix factored
/// once. The matrix does not depend on the target, so solve() and
/// error_ratio() reproduce a fresh assemble()+solve() bit for bit.
class OrdinaryKriging {
 public:
  OrdinaryKriging(const CorrelationModel& model, std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] const CorrelationModel& model() const noexcept { return model_; }
  [[nodiscard]] double condition_estimate() const noexcept { return lu_.condition_estimate(); }

  [[nodiscard]] std::vector<double> rhs(double target) const;
  [[nodiscard]] KrigingSolution solve(std::span<const double> values, double target) const;
  /// e(target); independent of the data values.
  [[nodiscard]] double error_ratio(double target) const;

 private:
  CorrelationModel model_;
  std::size_t n_;
  linalg::LuFactorization lu_;
};

}  // namespace krigmv
