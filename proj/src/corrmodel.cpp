#include "krigmv/corrmodel.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "corrmodel";

double parse_param(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw UsageError(kModule, "parameter " + std::string(key) + "='" + std::string(text) +
                                  "' is not a finite number");
  }
  return value;
}

}  // namespace

CorrelationModel::CorrelationModel(CorrelationFamily family, double p0, double p1)
    : family_(family), p0_(p0), p1_(p1) {
  if (family == CorrelationFamily::frozen_power) log_t_ = std::log(p0);
}

CorrelationModel CorrelationModel::frozen_power(double t, double beta) {
  if (!(t > 1.0) || !std::isfinite(t)) {
    throw UsageError(kModule, "frozen_power requires t > 1, got t=" + format_double(t));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw UsageError(kModule, "frozen_power requires beta > 0, got beta=" + format_double(beta));
  }
  return {CorrelationFamily::frozen_power, t, beta};
}

CorrelationModel CorrelationModel::exponential(double range) {
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw UsageError(kModule, "exponential requires a > 0, got a=" + format_double(range));
  }
  return {CorrelationFamily::exponential, range, 0.0};
}

CorrelationModel CorrelationModel::gaussian(double range) {
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw UsageError(kModule, "gaussian requires a > 0, got a=" + format_double(range));
  }
  return {CorrelationFamily::gaussian, range, 0.0};
}

CorrelationModel CorrelationModel::constant(double c) {
  if (!(std::abs(c) < 1.0)) {
    throw UsageError(kModule, "constant requires |c| < 1, got c=" + format_double(c));
  }
  return {CorrelationFamily::constant, c, 0.0};
}

CorrelationModel CorrelationModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string family(spec.substr(0, colon));
  std::map<std::string, double, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError(kModule, "malformed parameter '" + std::string(item) + "' in model '" +
                                      std::string(spec) + "'");
      }
      const auto key = item.substr(0, eq);
      params[std::string(key)] = parse_param(key, item.substr(eq + 1));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }

  auto take = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    const auto it = params.find(key);
    if (it == params.end()) {
      if (fallback) return *fallback;
      throw UsageError(kModule, "model '" + std::string(spec) + "' is missing parameter " + key);
    }
    const double value = it->second;
    params.erase(it);
    return value;
  };

  CorrelationModel model = [&] {
    if (family == "frozen_power") {
      const double t = take("t");
      return frozen_power(t, take("beta", kFrozenPowerBeta));
    }
    if (family == "exponential") return exponential(take("a"));
    if (family == "gaussian") return gaussian(take("a"));
    if (family == "constant") return constant(take("c"));
    throw UsageError(kModule, "unknown correlation family '" + family + "'");
  }();
  if (!params.empty()) {
    throw UsageError(kModule, "unexpected parameter " + params.begin()->first + " for family " + family);
  }
  return model;
}

double CorrelationModel::operator()(double delta) const {
  if (delta == 0.0) return 1.0;
  if (!(delta > 0.0)) throw UsageError(kModule, "lag must be >= 0, got " + format_double(delta));
  switch (family_) {
    case CorrelationFamily::frozen_power: {
      const double scaled = delta / p0_;
      return -std::exp(-p1_ * scaled * scaled * log_t_);
    }
    case CorrelationFamily::exponential:
      return std::exp(-delta / p0_);
    case CorrelationFamily::gaussian: {
      const double scaled = delta / p0_;
      return std::exp(-scaled * scaled);
    }
    case CorrelationFamily::constant:
      return p0_;
  }
  return 0.0;
}

std::string CorrelationModel::to_string() const {
  switch (family_) {
    case CorrelationFamily::frozen_power:
      return "frozen_power:t=" + format_double(p0_) + ",beta=" + format_double(p1_);
    case CorrelationFamily::exponential:
      return "exponential:a=" + format_double(p0_);
    case CorrelationFamily::gaussian:
      return "gaussian:a=" + format_double(p0_);
    case CorrelationFamily::constant:
      return "constant:c=" + format_double(p0_);
  }
  return {};
}

}  // namespace krigmv
