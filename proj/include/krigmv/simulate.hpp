#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "krigmv/corrmodel.hpp"
#include "krigmv/linsolve.hpp"

namespace krigmv {

struct SimulationSpec {
  CorrelationModel model = CorrelationModel::constant(0.0);
  std::size_t n = 0;
  double mean = 0.0;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};

/// Counter-based standard-normal stream: deviate i depends only on (seed, i),
/// via a SplitMix64 hash to an open-interval uniform and the inverse normal CDF.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : seed_(seed) {}

  [[nodiscard]] double uniform(std::uint64_t counter) const noexcept;
  [[nodiscard]] double normal(std::uint64_t counter) const;
  [[nodiscard]] std::vector<double> normals(std::size_t count, std::uint64_t first = 0) const;

 private:
  std::uint64_t seed_;
};

/// Stationary Gaussian series generator for one model and length; the
/// correlation factor is computed once and reused across seeds.
class GaussianSimulator {
 public:
  /// Throws IndefiniteMatrixError when the correlation matrix over 1..n is
  /// not positive semidefinite within 1e-10 (e.g. frozen_power).
  GaussianSimulator(const CorrelationModel& model, std::size_t n);

  /// mean + sqrt(sigma2) L z with z from NormalStream(seed).
  [[nodiscard]] std::vector<double> generate(double mean, double sigma2, std::uint64_t seed) const;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  linalg::DenseMatrix factor_;
};

[[nodiscard]] std::vector<double> gaussian_series(const SimulationSpec& spec);

}  // namespace krigmv
