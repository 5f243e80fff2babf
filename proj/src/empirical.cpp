#include "krigmv/empirical.hpp"

#include <algorithm>
#include <string>

#include "krigmv/error.hpp"

namespace krigmv {

namespace {
constexpr const char* kModule = "empirical";
}

EmpiricalVariogram semivariogram(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 2) throw UsageError(kModule, "semivariogram needs n >= 2, got " + std::to_string(n));

  EmpiricalVariogram v;
  v.gamma.assign(n, 0.0);
  v.pair_count.resize(n);
  v.pair_count[0] = n;
  for (std::size_t h = 1; h < n; ++h) {
    const std::size_t pairs = n - h;
    double sum = 0.0;
    for (std::size_t j = 0; j < pairs; ++j) {
      const double diff = data[j] - data[j + h];
      sum += diff * diff;
    }
    v.gamma[h] = 0.5 * sum / static_cast<double>(pairs);
    v.pair_count[h] = pairs;
  }
  return v;
}

MonotoneRange monotone_range(const EmpiricalVariogram& v) {
  if (v.gamma.size() < 2) throw UsageError(kModule, "variogram needs lags 0 and 1");
  if (!(v.gamma[1] > 0.0)) {
    throw DataError(kModule, "degenerate series: gamma(1) = 0, no admissible monotone range");
  }
  std::size_t d = 1;
  while (d + 1 < v.gamma.size() && v.gamma[d + 1] >= v.gamma[d]) ++d;
  return {d, v.gamma[d]};
}

std::vector<double> variogram_correlation(const EmpiricalVariogram& v, const MonotoneRange& r) {
  if (r.d >= v.gamma.size() || r.sigma2_hat != v.gamma[r.d]) {
    throw UsageError(kModule, "monotone range d=" + std::to_string(r.d) +
                                  " does not belong to this variogram");
  }
  std::vector<double> rho(r.d + 1);
  for (std::size_t h = 0; h <= r.d; ++h) rho[h] = 1.0 - v.gamma[h] / r.sigma2_hat;
  rho[r.d] = 0.0;
  return rho;
}

double covariance(std::span<const double> data, std::size_t h) {
  const std::size_t n = data.size();
  if (n < 2 || h > n - 2) {
    throw UsageError(kModule, "covariance lag h=" + std::to_string(h) + " outside 0.." +
                                  (n < 2 ? std::string("(none)") : std::to_string(n - 2)));
  }
  const std::size_t pairs = n - h;
  const double m = static_cast<double>(pairs);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < pairs; ++j) {
    head += data[j];
    tail += data[j + h];
  }
  head /= m;
  tail /= m;
  // Centered form of sum(v_j v_{j+h})/(n-h) - sum(v_j) sum(v_{j+h})/(n-h)^2.
  double cross = 0.0;
  for (std::size_t j = 0; j < pairs; ++j) cross += (data[j] - head) * (data[j + h] - tail);
  return cross / m;
}

CovarianceCorrelation covariance_correlation(std::span<const double> data, std::size_t d) {
  const double c0 = covariance(data, 0);
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (c0 <= 0.0 || *lo == *hi) throw DataError(kModule, "degenerate series: C(0) = 0");
  if (data.size() < 2 || d > data.size() - 2) {
    throw UsageError(kModule, "correlation lag bound d=" + std::to_string(d) + " exceeds n-2");
  }
  CovarianceCorrelation out;
  out.rho.resize(d + 1);
  out.rho[0] = 1.0;
  for (std::size_t h = 1; h <= d; ++h) {
    out.rho[h] = covariance(data, h) / c0;
    if (out.rho[h] < 0.0 || out.rho[h] > 1.0) out.out_of_range_lags.push_back(h);
  }
  return out;
}

VariogramTable variogram_table(std::span<const double> data) {
  const auto v = semivariogram(data);
  const std::size_t n = data.size();

  VariogramTable table;
  table.rows.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    auto& row = table.rows[h];
    row.h = h;
    row.pair_count = v.pair_count[h];
    row.gamma = v.gamma[h];
    if (h <= n - 2) row.c = covariance(data, h);
  }

  if (!(v.gamma[1] > 0.0)) return table;
  const auto range = monotone_range(v);
  table.range = range;
  const auto rho_v = variogram_correlation(v, range);
  for (std::size_t h = 0; h <= range.d; ++h) table.rows[h].rho_variogram = rho_v[h];

  const double c0 = *table.rows[0].c;
  if (c0 > 0.0) {
    const std::size_t bound = std::min(range.d, n - 2);
    for (std::size_t h = 0; h <= bound; ++h) table.rows[h].rho_covariance = *table.rows[h].c / c0;
  }
  return table;
}

}  // namespace krigmv
