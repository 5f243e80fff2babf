#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace krigmv {

/// Ordered real samples on the implicit integer coordinates 1..N.
///
/// Invariants: N >= 2 and every value is finite. Immutable once built.
class Series {
 public:
  explicit Series(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Value at 1-based coordinate; throws UsageError when out of 1..N.
  [[nodiscard]] double at(std::size_t coordinate) const;

  /// First `count` values (count >= 1) as a plain view.
  [[nodiscard]] std::span<const double> prefix(std::size_t count) const;

 private:
  std::vector<double> values_;
};

/// Data window 1..n plus the evaluation values n+1..N of the same series.
class Window {
 public:
  Window(Series data, std::vector<double> evaluation);

  [[nodiscard]] const Series& data() const noexcept { return data_; }
  [[nodiscard]] std::span<const double> evaluation() const noexcept { return evaluation_; }
  [[nodiscard]] std::size_t n() const noexcept { return data_.size(); }
  /// Total length N of the parent series.
  [[nodiscard]] std::size_t total() const noexcept { return data_.size() + evaluation_.size(); }

  /// Value at 1-based coordinate of the parent series, or nullopt past N.
  [[nodiscard]] std::optional<double> value_at(std::size_t coordinate) const noexcept;

 private:
  Series data_;
  std::vector<double> evaluation_;
};

/// Parses one value per line, or the 0-based `column` of comma-separated rows.
/// A non-numeric first row is taken as a header. Blank lines and lines
/// starting with '#' are skipped. Errors name the 1-based line number.
[[nodiscard]] Series read_csv(std::istream& in, std::optional<std::size_t> column = std::nullopt);

[[nodiscard]] Series load_csv(const std::filesystem::path& path,
                              std::optional<std::size_t> column = std::nullopt);

/// Writes a "value" header and one shortest round-trip decimal per line.
void write_csv(std::ostream& out, std::span<const double> values);

[[nodiscard]] Window split(const Series& series, std::size_t n);

}  // namespace krigmv
