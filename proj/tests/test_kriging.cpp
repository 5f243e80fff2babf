#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "krigmv/error.hpp"
#include "krigmv/estimator.hpp"
#include "krigmv/kriging.hpp"
#include "oracles.hpp"

using namespace krigmv;
using doctest::Approx;

namespace {

CorrelationModel random_model(std::mt19937_64& rng, std::size_t n, bool include_frozen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (rng() % (include_frozen ? 4 : 3)) {
    case 0: return CorrelationModel::exponential(0.2 + 5.0 * unit(rng));
    case 1: return CorrelationModel::gaussian(0.3 + 1.0 * unit(rng));
    case 2: return CorrelationModel::constant(-0.4 / static_cast<double>(n) + 0.9 * unit(rng));
    default: return CorrelationModel::frozen_power(static_cast<double>(n) + 1.0 + 2.0 * n * unit(rng));
  }
}

}  // namespace

TEST_CASE("assemble: smallest system") {
  const auto model = CorrelationModel::exponential(2.0);
  const auto sys = assemble(model, 1, 3.0);
  CHECK(sys.matrix == linalg::DenseMatrix(2, {1.0, 1.0, 1.0, 0.0}));
  CHECK(sys.rhs == std::vector<double>{model(2.0), 1.0});
}

TEST_CASE("assemble: structure") {
  const auto sys = assemble(CorrelationModel::constant(0.3), 2, 5.0);
  CHECK(sys.matrix(0, 0) == 1.0);
  CHECK(sys.matrix(0, 1) == 0.3);
  CHECK(sys.matrix(1, 0) == 0.3);
  CHECK(sys.matrix(1, 1) == 1.0);

  const auto exp_sys = assemble(CorrelationModel::exponential(1.0), 3, 4.0);
  CHECK(exp_sys.rhs[0] == Approx(std::exp(-3.0)).epsilon(1e-15));
  CHECK(exp_sys.rhs[1] == Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(exp_sys.rhs[2] == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp_sys.rhs[3] == 1.0);
  CHECK(exp_sys.matrix.symmetric());
  CHECK(exp_sys.matrix(3, 3) == 0.0);

  CHECK_THROWS_AS((void)assemble(CorrelationModel::exponential(1.0), 3, 0.0), UsageError);
  CHECK_THROWS_AS((void)assemble(CorrelationModel::exponential(1.0), 0, 2.0), UsageError);
}

TEST_CASE("n = 1 closed form") {
  const auto model = CorrelationModel::exponential(10.0);
  const std::vector<double> v{4.25};
  for (double j : {1.0, 2.5, 7.0, 40.0}) {
    const double rho = model(std::abs(1.0 - j));
    const auto s = solve(assemble(model, 1, j), v);
    CHECK(s.weights[0] == Approx(1.0).epsilon(1e-15));
    CHECK(s.multiplier == Approx(rho - 1.0).epsilon(1e-14));
    CHECK(s.predictor == Approx(4.25).epsilon(1e-15));
    CHECK(s.error_ratio == Approx(2.0 * (1.0 - rho)).epsilon(1e-14));
  }
  CHECK(std::abs(error_ratio_at(model, v, 1.0)) <= 1e-15);
  CHECK(error_ratio_at(model, v, 1.0 + 10.0 * std::log(2.0)) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("n = 2 constant closed form") {
  const std::vector<double> v{1.0, 3.0};
  for (double c : {-0.3, 0.0, 1.0 / 3.0, 0.5, 0.8}) {
    const auto model = CorrelationModel::constant(c);
    for (double j : {2.5, 3.0, 17.25}) {
      const auto s = solve(assemble(model, 2, j), v);
      CHECK(s.weights[0] == Approx(0.5).epsilon(1e-14));
      CHECK(s.weights[1] == Approx(0.5).epsilon(1e-14));
      CHECK(s.multiplier == Approx((c - 1.0) / 2.0).epsilon(1e-14));
      CHECK(s.error_ratio == Approx(1.5 * (1.0 - c)).epsilon(1e-14));
    }
  }
  for (double j : {2.2, 9.0, 1e4}) {
    CHECK(error_ratio_at(CorrelationModel::constant(1.0 / 3.0), v, j) == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("oracle equivalence with Cramer's rule for n <= 4") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int compared = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng() % 4;
    const auto model = random_model(rng, n, true);
    const auto v = oracle::random_series(rng, n, 2.0);
    const double j = 0.5 + (static_cast<double>(n) + 5.0) * unit(rng);
    KrigingSolution s;
    try {
      s = solve(assemble(model, n, j), v);
    } catch (const SingularMatrixError&) {
      continue;
    }
    ++compared;
    const auto ref = oracle::kriging([&](double d) { return model(d); }, v, j);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s.weights[i] - ref.weights[i]) <= 1e-10);
    CHECK(std::abs(s.multiplier - ref.multiplier) <= 1e-10);
    CHECK(std::abs(s.predictor - ref.predictor) <= 1e-10);
    CHECK(std::abs(s.error_ratio - ref.error_ratio) <= 1e-10);
  }
  CHECK(compared > 250);
}

TEST_CASE("property: unbiasedness and exact interpolation") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 30;
    const auto model = random_model(rng, n, true);
    const auto v = oracle::random_series(rng, n);
    std::optional<OrdinaryKriging> ok;
    try {
      ok.emplace(model, n);
    } catch (const SingularMatrixError&) {
      continue;
    }
    const double j = 0.5 + 3.0 * static_cast<double>(n) * unit(rng);
    const auto s = ok->solve(v, j);
    CHECK(std::abs(std::accumulate(s.weights.begin(), s.weights.end(), 0.0) - 1.0) <= 1e-9);
    CHECK(std::isfinite(s.error_ratio));

    const std::size_t i = 1 + rng() % n;
    const auto at = ok->solve(v, static_cast<double>(i));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(at.weights[k] - (k + 1 == i ? 1.0 : 0.0)) <= 1e-9);
    CHECK(std::abs(at.error_ratio) <= 1e-9);
  }
}

TEST_CASE("factored reuse is bit-identical to fresh solves") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng() % 25;
    const auto model = random_model(rng, n, true);
    const auto v = oracle::random_series(rng, n);
    std::optional<OrdinaryKriging> ok;
    try {
      ok.emplace(model, n);
    } catch (const SingularMatrixError&) {
      continue;
    }
    for (int k = 0; k < 5; ++k) {
      const double j = static_cast<double>(n) * (0.1 + 20.0 * unit(rng));
      const auto reused = ok->solve(v, j);
      const auto fresh = solve(assemble(model, n, j), v);
      CHECK(reused.weights == fresh.weights);
      CHECK(reused.multiplier == fresh.multiplier);
      CHECK(reused.predictor == fresh.predictor);
      CHECK(reused.error_ratio == fresh.error_ratio);
      CHECK(ok->error_ratio(j) == fresh.error_ratio);
    }
  }
}

TEST_CASE("property: far-field predictor converges to the GLS mean") {
  std::mt19937_64 rng(555);
  int compared = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rng() % 29;
    const auto model = random_model(rng, n, true);
    if (!model.decaying()) continue;
    const auto v = oracle::random_series(rng, n, 5.0);
    try {
      const auto s = solve(assemble(model, n, static_cast<double>(n) + 1e6), v);
      CHECK(std::abs(s.predictor - gls_mean(model, v)) <= 1e-6);
      ++compared;
    } catch (const SingularMatrixError&) {
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("singular systems report the module and a condition estimate") {
  // Two data with rho(1) = 1 - tiny: duplicated coordinates in effect.
  const auto model = CorrelationModel::gaussian(1e7);
  const std::vector<double> v{1.0, 2.0, 3.0};
  try {
    (void)solve(assemble(model, 3, 5.0), v);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.module() == "kriging");
    CHECK(e.condition_estimate() > 1e12);
  }
  CHECK_THROWS_AS((void)solve(assemble(CorrelationModel::exponential(1.0), 3, 5.0), std::vector<double>{1.0}),
                  UsageError);
}
