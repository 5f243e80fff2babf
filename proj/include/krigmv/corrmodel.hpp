#pragma once

#include <string>
#include <string_view>

namespace krigmv {

/// Default exponent of the frozen power family.
inline constexpr double kFrozenPowerBeta = 1.0135;

enum class CorrelationFamily { frozen_power, exponential, gaussian, constant };

/// Lag-to-correlation function rho(delta), delta >= 0, with rho(0) == 1.
///
///   frozen_power(t, beta): -t^(-beta (delta/t)^2) for delta > 0
///   exponential(a):        exp(-delta/a)
///   gaussian(a):           exp(-(delta/a)^2)
///   constant(c):           c for delta > 0
///
/// frozen_power is not positive semidefinite in general; it is accepted
/// as-is and left to the solvers to reject.
class CorrelationModel {
 public:
  [[nodiscard]] static CorrelationModel frozen_power(double t, double beta = kFrozenPowerBeta);
  [[nodiscard]] static CorrelationModel exponential(double range);
  [[nodiscard]] static CorrelationModel gaussian(double range);
  [[nodiscard]] static CorrelationModel constant(double c);

  /// Parses "family:key=value,..." e.g. "frozen_power:t=116,beta=1.0135",
  /// "exponential:a=10", "constant:c=0.5".
  [[nodiscard]] static CorrelationModel parse(std::string_view spec);

  [[nodiscard]] double operator()(double delta) const;

  [[nodiscard]] CorrelationFamily family() const noexcept { return family_; }
  /// t for frozen_power, range a for exponential/gaussian, c for constant.
  [[nodiscard]] double primary() const noexcept { return p0_; }
  /// beta for frozen_power, unused otherwise.
  [[nodiscard]] double secondary() const noexcept { return p1_; }

  /// True for families whose correlation tends to zero with the lag.
  [[nodiscard]] bool decaying() const noexcept { return family_ != CorrelationFamily::constant; }

  /// Canonical specification string accepted by parse().
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const CorrelationModel&, const CorrelationModel&) = default;

 private:
  CorrelationModel(CorrelationFamily family, double p0, double p1);

  CorrelationFamily family_;
  double p0_;
  double p1_;
  double log_t_ = 0.0;
};

}  // namespace krigmv
