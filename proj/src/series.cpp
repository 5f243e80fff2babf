#include "krigmv/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "krigmv/error.hpp"
#include "krigmv/format.hpp"

namespace krigmv {

namespace {

constexpr const char* kModule = "series";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '"' && field.size() >= 2 && field.back() == '"') {
    field = trim(field.substr(1, field.size() - 2));
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::string_view> select_field(std::string_view line, std::size_t column) {
  std::size_t index = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (index == column) {
      return line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    }
    if (comma == std::string_view::npos) return std::nullopt;
    start = comma + 1;
    ++index;
  }
}

}  // namespace

Series::Series(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw DataError(kModule, "series needs at least 2 values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError(kModule, "non-finite value at coordinate " + std::to_string(i + 1));
    }
  }
}

double Series::at(std::size_t coordinate) const {
  if (coordinate < 1 || coordinate > values_.size()) {
    throw UsageError(kModule, "coordinate " + std::to_string(coordinate) + " outside 1.." +
                                  std::to_string(values_.size()));
  }
  return values_[coordinate - 1];
}

std::span<const double> Series::prefix(std::size_t count) const {
  if (count < 1 || count > values_.size()) {
    throw UsageError(kModule, "prefix length " + std::to_string(count) + " outside 1.." +
                                  std::to_string(values_.size()));
  }
  return std::span<const double>(values_).first(count);
}

Window::Window(Series data, std::vector<double> evaluation)
    : data_(std::move(data)), evaluation_(std::move(evaluation)) {
  if (evaluation_.empty()) throw UsageError(kModule, "window needs at least one evaluation value");
}

std::optional<double> Window::value_at(std::size_t coordinate) const noexcept {
  if (coordinate < 1) return std::nullopt;
  if (coordinate <= data_.size()) return data_.values()[coordinate - 1];
  const std::size_t offset = coordinate - data_.size() - 1;
  if (offset < evaluation_.size()) return evaluation_[offset];
  return std::nullopt;
}

Series read_csv(std::istream& in, std::optional<std::size_t> column) {
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_number;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    std::string_view field = content;
    if (column) {
      const auto selected = select_field(content, *column);
      if (!selected) {
        if (first_row) {
          throw DataError(kModule, "column " + std::to_string(*column) + " missing in header row " +
                                       std::to_string(line_number));
        }
        throw DataError(kModule, "column " + std::to_string(*column) + " missing at row " +
                                     std::to_string(line_number));
      }
      field = *selected;
    }

    const auto value = parse_number(field);
    if (!value) {
      if (first_row) {
        first_row = false;
        continue;  // header
      }
      throw DataError(kModule, "non-numeric cell '" + std::string(trim(field)) + "' at row " +
                                   std::to_string(line_number));
    }
    if (!std::isfinite(*value)) {
      throw DataError(kModule, "non-finite cell at row " + std::to_string(line_number));
    }
    first_row = false;
    values.push_back(*value);
  }
  if (in.bad()) throw DataError(kModule, "read failure");
  if (values.size() < 2) {
    throw DataError(kModule, "fewer than 2 values (" + std::to_string(values.size()) + ")");
  }
  return Series(std::move(values));
}

Series load_csv(const std::filesystem::path& path, std::optional<std::size_t> column) {
  std::ifstream in(path);
  if (!in) throw DataError(kModule, "cannot open '" + path.string() + "'");
  return read_csv(in, column);
}

void write_csv(std::ostream& out, std::span<const double> values) {
  out << "value\n";
  for (double v : values) out << format_double(v) << '\n';
}

Window split(const Series& series, std::size_t n) {
  if (n < 2 || n >= series.size()) {
    throw UsageError(kModule, "split point n=" + std::to_string(n) + " must satisfy 2 <= n < N=" +
                                  std::to_string(series.size()));
  }
  const auto all = series.values();
  return Window(Series(std::vector<double>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n))),
                std::vector<double>(all.begin() + static_cast<std::ptrdiff_t>(n), all.end()));
}

}  // namespace krigmv
