#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "krigmv/error.hpp"
#include "krigmv/kriging.hpp"
#include "krigmv/simulate.hpp"
#include "krigmv/validate.hpp"
#include "oracles.hpp"

using namespace krigmv;
using doctest::Approx;

TEST_CASE("standard normal CDF") {
  CHECK(standard_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(standard_normal_cdf(1.959964) - 0.975) <= 1e-6);
  CHECK(std::abs(standard_normal_cdf(1.959964) - oracle::normal_cdf_quadrature(1.959964)) <= 1e-10);
  for (double x : {0.1, 0.5, 1.0, 2.5, 4.0, 6.0}) {
    CHECK(std::abs(standard_normal_cdf(-x) - (1.0 - standard_normal_cdf(x))) <= 1e-12);
    CHECK(std::abs(standard_normal_cdf(x) - oracle::normal_cdf_quadrature(x)) <= 1e-10);
  }
}

TEST_CASE("Kolmogorov tail matches the raw series") {
  for (double lambda : {0.3, 0.5, 0.615, 0.9, 0.999, 1.0, 1.2, 2.0, 3.0}) {
    CHECK(std::abs(kolmogorov_q(lambda) - oracle::kolmogorov_series(lambda, 2000)) <= 1e-12);
  }
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(1e-3) == 1.0);
  CHECK(kolmogorov_q(10.0) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("K-S test for a single sample at zero") {
  const auto r = ks_test(std::vector<double>{0.0});
  CHECK(r.d_stat == 0.5);
  CHECK(r.n_samples == 1);
  CHECK(std::abs(r.p_value - 0.8438) <= 1e-3);
  // Series oracle at lambda = (1 + 0.12 + 0.11) * 0.5.
  CHECK(std::abs(r.p_value - oracle::kolmogorov_series(1.23 * 0.5)) <= 1e-12);
  CHECK_THROWS_AS((void)ks_test(std::vector<double>{}), UsageError);
}

TEST_CASE("property: K-S is permutation invariant and bounded") {
  std::mt19937_64 rng(90);
  for (int rep = 0; rep < 100; ++rep) {
    auto x = oracle::random_series(rng, 1 + rng() % 150, rep % 3 == 0 ? 2.0 : 1.0);
    const auto a = ks_test(x);
    std::shuffle(x.begin(), x.end(), rng);
    const auto b = ks_test(x);
    CHECK(a.d_stat == b.d_stat);
    CHECK(a.p_value == b.p_value);
    CHECK(a.d_stat >= 0.0);
    CHECK(a.d_stat <= 1.0);
    CHECK(a.p_value >= 0.0);
    CHECK(a.p_value <= 1.0);
  }
}

TEST_CASE("property: p-value is non-increasing in D at fixed k") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double k : {1.0, 10.0, 102.0, 5000.0}) {
    std::vector<double> d(2000);
    for (auto& x : d) x = unit(rng);
    std::sort(d.begin(), d.end());
    const double f = std::sqrt(k) + 0.12 + 0.11 / std::sqrt(k);
    double prev = 1.0;
    for (double x : d) {
      const double p = kolmogorov_q(f * x);
      CHECK(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("calibration: rejection rate of normal samples") {
  int rejections = 0;
  for (std::uint64_t rep = 0; rep < 1000; ++rep) {
    const auto z = NormalStream(1000 + rep).normals(102);
    if (ks_test(z).p_value < 0.05) ++rejections;
  }
  CHECK(std::abs(rejections / 1000.0 - 0.05) <= 0.02);
}

namespace {

Window synthetic_window(std::size_t n, std::size_t total, std::uint64_t seed) {
  const auto v = gaussian_series({CorrelationModel::exponential(5.0), total, 100.0, 4.0, seed});
  return split(Series(v), n);
}

}  // namespace

TEST_CASE("plan validation") {
  const auto w = synthetic_window(20, 60, 1);
  ValidationPlan plan;
  plan.n = 20;
  plan.t_first = 20;
  plan.t_last = 30;
  CHECK_THROWS_AS((void)clt_sequence(w, plan), UsageError);
  plan.t_first = 31;
  CHECK_THROWS_AS((void)clt_sequence(w, plan), UsageError);
  plan.t_first = 21;
  plan.n = 19;
  CHECK_THROWS_AS((void)clt_sequence(w, plan), UsageError);
  plan.n = 20;
  plan.beta = -1.0;
  CHECK_THROWS_AS((void)clt_sequence(w, plan), UsageError);

  plan.beta = 1.0135;
  plan.n = 115;
  plan.t_first = 116;
  plan.t_last = 217;
  CHECK(plan.k() == 102);
  CHECK(plan.model_for(116) == CorrelationModel::frozen_power(116.0, 1.0135));
}

TEST_CASE("frozen-power pipeline attempts every t in order") {
  const auto w = synthetic_window(30, 200, 2);
  ValidationPlan plan;
  plan.n = 30;
  plan.t_first = 31;
  plan.t_last = 60;
  std::optional<CltSequence> seq;
  try {
    seq = clt_sequence(w, plan);
  } catch (const EmptySampleError& e) {
    seq = e.sequence();
  }
  REQUIRE(seq->attempts.size() == 30);
  for (std::size_t i = 0; i < seq->attempts.size(); ++i) {
    const auto& a = seq->attempts[i];
    CHECK(a.t == 31 + i);
    CHECK(a.sample.has_value() == a.error.empty());
    if (a.sample) {
      const auto& s = *a.sample;
      CHECK(s.j_star > 30.0);
      CHECK(s.residual <= 1e-10);
      CHECK(s.observed_coordinate >= 31);
      CHECK(s.rounding_offset <= 0.5 + 1e-12);
      CHECK(s.observed == *w.value_at(s.observed_coordinate));
      CHECK(s.u == std::sqrt(30.0) * (s.observed - s.m_hat) / std::sqrt(s.sigma2_hat));
    }
  }
  CHECK(seq->used() + seq->failed() == 30);
}

TEST_CASE("centered observation gives zero residual") {
  // Data symmetric about 5 under the constant-free exponential model: the
  // observation at the chosen coordinate is set to m_hat.
  auto v = gaussian_series({CorrelationModel::exponential(3.0), 80, 5.0, 1.0, 9});
  const auto model = CorrelationModel::exponential(3.0);
  const auto out = solve_constraint(model, std::span<const double>(v).first(40));
  REQUIRE(out.solved());
  const auto coordinate = static_cast<std::size_t>(std::max(std::ceil(out.estimate->j_star - 0.5), 41.0));
  v[coordinate - 1] = out.estimate->m_hat;
  ValidationPlan plan;
  plan.n = 40;
  plan.t_first = 41;
  plan.t_last = 41;
  plan.model = model;
  const auto seq = clt_sequence(split(Series(v), 40), plan);
  REQUIRE(seq.attempts[0].sample.has_value());
  CHECK(seq.attempts[0].sample->u == 0.0);
}

TEST_CASE("pipeline equals an independent recomputation, bit for bit") {
  const std::size_t n = 40;
  const auto w = synthetic_window(n, 120, 3);
  const auto model = CorrelationModel::exponential(5.0);
  for (auto mode : {TargetMode::root, TargetMode::fixed}) {
    ValidationPlan plan;
    plan.n = n;
    plan.t_first = n + 1;
    plan.t_last = n + 60;
    plan.model = model;
    plan.mode = mode;
    const auto seq = clt_sequence(w, plan);
    const auto data = w.data().values();
    for (const auto& a : seq.attempts) {
      double j = static_cast<double>(a.t);
      if (mode == TargetMode::root) {
        const auto out = solve_constraint(model, data);
        REQUIRE(out.solved());
        j = out.estimate->j_star;
      }
      const auto sol = solve(assemble(model, n, j), data);
      const auto m = estimate_moments(sol.weights, data);
      std::size_t coord = a.t;
      if (mode == TargetMode::root) {
        coord = static_cast<std::size_t>(std::max(std::ceil(j - 0.5), static_cast<double>(n + 1)));
      }
      const double obs = w.evaluation()[coord - n - 1];
      REQUIRE(a.sample.has_value());
      CHECK(a.sample->j_star == j);
      CHECK(a.sample->m_hat == m.m_hat);
      CHECK(a.sample->sigma2_hat == m.sigma2_hat);
      CHECK(a.sample->observed == obs);
      CHECK(a.sample->u == std::sqrt(double(n)) * (obs - m.m_hat) / std::sqrt(m.sigma2_hat));
    }
  }
}

TEST_CASE("determinism across runs and thread counts") {
  const auto w = synthetic_window(25, 120, 4);
  ValidationPlan plan;
  plan.n = 25;
  plan.t_first = 26;
  plan.t_last = 45;
  auto run = [&](unsigned threads) {
    plan.threads = threads;
    try {
      return clt_sequence(w, plan);
    } catch (const EmptySampleError& e) {
      return e.sequence();
    }
  };
  const auto a = run(1);
  const auto b = run(1);
  const auto c = run(4);
  REQUIRE(a.attempts.size() == c.attempts.size());
  for (std::size_t i = 0; i < a.attempts.size(); ++i) {
    for (const auto* other : {&b, &c}) {
      const auto& x = a.attempts[i];
      const auto& y = other->attempts[i];
      CHECK(x.t == y.t);
      CHECK(x.error == y.error);
      CHECK(x.sample.has_value() == y.sample.has_value());
      if (x.sample && y.sample) {
        CHECK(x.sample->u == y.sample->u);
        CHECK(x.sample->j_star == y.sample->j_star);
      }
      CHECK(x.gls_mean == y.gls_mean);
    }
  }
}

TEST_CASE("targets beyond the series end are excluded and counted") {
  const auto w = synthetic_window(30, 33, 5);
  ValidationPlan plan;
  plan.n = 30;
  plan.t_first = 31;
  plan.t_last = 35;
  plan.mode = TargetMode::fixed;
  plan.model = CorrelationModel::exponential(5.0);
  const auto seq = clt_sequence(w, plan);
  CHECK(seq.used() == 3);
  CHECK(seq.failed() == 2);
  CHECK(seq.attempts[3].error.find("beyond the series end") != std::string::npos);
  CHECK(seq.u_values().size() == 3);
}

TEST_CASE("no usable sample raises with the per-t record") {
  const auto w = synthetic_window(10, 40, 6);
  ValidationPlan plan;
  plan.n = 10;
  plan.t_first = 11;
  plan.t_last = 14;
  plan.model = CorrelationModel::constant(0.5);  // root-free everywhere
  try {
    (void)clt_sequence(w, plan);
    FAIL("expected EmptySampleError");
  } catch (const EmptySampleError& e) {
    CHECK(e.sequence().attempts.size() == 4);
    CHECK(e.sequence().used() == 0);
    CHECK(e.module() == "validate");
  }
}
