#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "krigmv/empirical.hpp"
#include "krigmv/estimator.hpp"
#include "krigmv/validate.hpp"

namespace krigmv::report {

inline constexpr const char* kToolName = "krigmv";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Format { csv, json };

/// Provenance stamped on every emitted table: CSV gets a leading comment
/// line, JSON a "meta" object.
struct Metadata {
  std::string command;
  /// Canonical "key=value;..." rendering of the resolved configuration.
  std::string config;

  [[nodiscard]] std::uint64_t config_hash() const noexcept;
  [[nodiscard]] std::string hash_hex() const;
};

/// Everything the `estimate` subcommand reports.
struct EstimateRecord {
  std::string model;
  std::size_t n = 0;
  ConstraintStatus status = ConstraintStatus::no_root;
  std::optional<double> j_star;
  std::optional<double> m_hat;
  std::optional<double> sigma2_hat;
  std::optional<double> residual;
  std::optional<double> gls_mean;
  std::vector<Bracket> brackets;
  std::string message;
};

void write_variogram(std::ostream& out, const VariogramTable& table, Format format, const Metadata& meta);

void write_estimate(std::ostream& out, const EstimateRecord& record, Format format, const Metadata& meta);

/// Columns t, j_star, m_hat, sigma2_hat, observed, u, status plus a summary
/// (k_attempted, k_used, k_failed, D, p_value).
void write_validation(std::ostream& out, const CltSequence& sequence, const std::optional<KsResult>& ks,
                      Format format, const Metadata& meta);

/// Estimated mean per frozen index (j_star, m_hat) against the asymptotic
/// GLS mean; the plot-data behind the mean-estimate figure.
void write_plot_data(std::ostream& out, const CltSequence& sequence, Format format, const Metadata& meta);

void write_series(std::ostream& out, const std::vector<double>& values, const Metadata& meta);

/// Single-line JSON error record.
void write_error(std::ostream& out, const std::string& module, const std::string& kind,
                 const std::string& message, const Metadata& meta);

}  // namespace krigmv::report
