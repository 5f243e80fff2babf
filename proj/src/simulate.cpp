#include "krigmv/simulate.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "simulate";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double NormalStream::uniform(std::uint64_t counter) const noexcept {
  const std::uint64_t bits = splitmix64(splitmix64(seed_) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
  // 53 random bits centred in their cell: strictly inside (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::normal(std::uint64_t counter) const {
  const double u = uniform(counter);
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

std::vector<double> NormalStream::normals(std::size_t count, std::uint64_t first) const {
  std::vector<double> z(count);
  for (std::size_t i = 0; i < count; ++i) z[i] = normal(first + i);
  return z;
}

GaussianSimulator::GaussianSimulator(const CorrelationModel& model, std::size_t n) : n_(n) {
  if (n < 1) throw UsageError(kModule, "series length n must be >= 1");
  linalg::DenseMatrix r(n);
  std::vector<double> by_lag(n);
  for (std::size_t lag = 0; lag < n; ++lag) by_lag[lag] = model(static_cast<double>(lag));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) r(i, k) = by_lag[i > k ? i - k : k - i];
  }
  try {
    factor_ = linalg::psd_factor(r, 1e-10);
  } catch (const IndefiniteMatrixError&) {
    throw IndefiniteMatrixError(kModule, "model " + model.to_string() +
                                             " is not positive semidefinite over coordinates 1.." +
                                             std::to_string(n) + "; refusing to simulate");
  }
}

std::vector<double> GaussianSimulator::generate(double mean, double sigma2, std::uint64_t seed) const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw UsageError(kModule, "variance must be finite and >= 0, got " + format_double(sigma2));
  }
  if (!std::isfinite(mean)) throw UsageError(kModule, "mean must be finite");
  std::vector<double> out(n_, mean);
  if (sigma2 == 0.0) return out;
  const auto z = NormalStream(seed).normals(n_);
  const double scale = std::sqrt(sigma2);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto row = factor_.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += row[k] * z[k];
    out[i] = mean + scale * s;
  }
  return out;
}

std::vector<double> gaussian_series(const SimulationSpec& spec) {
  return GaussianSimulator(spec.model, spec.n).generate(spec.mean, spec.sigma2, spec.seed);
}

}  // namespace krigmv
