#include "krigmv/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "krigmv/format.hpp"

namespace krigmv::report {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

ordered_json value(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json meta_json(const Metadata& meta) {
  return ordered_json{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"command", meta.command},
                      {"config", meta.config},
                      {"config_hash", meta.hash_hex()}};
}

void csv_meta(std::ostream& out, const Metadata& meta) {
  out << "# " << kToolName << ' ' << kToolVersion << " command=" << meta.command
      << " config_hash=" << meta.hash_hex() << '\n';
  out << "# config " << meta.config << '\n';
}

std::string brackets_cell(const std::vector<Bracket>& brackets) {
  std::string s;
  for (const auto& b : brackets) {
    if (!s.empty()) s += ';';
    s += format_double(b.lo) + ':' + format_double(b.hi);
  }
  return s;
}

}  // namespace

std::uint64_t Metadata::config_hash() const noexcept {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : command + '\n' + config) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Metadata::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash()));
  return buf;
}

void write_variogram(std::ostream& out, const VariogramTable& table, Format format, const Metadata& meta) {
  if (format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
      rows.push_back(ordered_json{{"h", r.h},
                                  {"pair_count", r.pair_count},
                                  {"gamma", r.gamma},
                                  {"rho_variogram", value(r.rho_variogram)},
                                  {"c", value(r.c)},
                                  {"rho_covariance", value(r.rho_covariance)}});
    }
    ordered_json doc{{"meta", meta_json(meta)}, {"rows", rows}};
    if (table.range) {
      doc["monotone_range"] = ordered_json{{"d", table.range->d}, {"sigma2_hat", table.range->sigma2_hat}};
    } else {
      doc["monotone_range"] = nullptr;
    }
    out << doc.dump(2) << '\n';
    return;
  }
  csv_meta(out, meta);
  if (table.range) {
    out << "# monotone_range d=" << table.range->d << " sigma2_hat=" << format_double(table.range->sigma2_hat)
        << '\n';
  } else {
    out << "# monotone_range none (degenerate series)\n";
  }
  out << "h,pair_count,gamma,rho_variogram,c,rho_covariance\n";
  for (const auto& r : table.rows) {
    out << r.h << ',' << r.pair_count << ',' << format_double(r.gamma) << ',' << cell(r.rho_variogram) << ','
        << cell(r.c) << ',' << cell(r.rho_covariance) << '\n';
  }
}

void write_estimate(std::ostream& out, const EstimateRecord& rec, Format format, const Metadata& meta) {
  if (format == Format::json) {
    ordered_json brackets = ordered_json::array();
    for (const auto& b : rec.brackets) brackets.push_back(ordered_json::array({b.lo, b.hi}));
    ordered_json doc{{"meta", meta_json(meta)},
                     {"model", rec.model},
                     {"n", rec.n},
                     {"status", to_string(rec.status)},
                     {"j_star", value(rec.j_star)},
                     {"m_hat", value(rec.m_hat)},
                     {"sigma2_hat", value(rec.sigma2_hat)},
                     {"residual", value(rec.residual)},
                     {"gls_mean", value(rec.gls_mean)},
                     {"brackets", brackets},
                     {"message", rec.message}};
    out << doc.dump(2) << '\n';
    return;
  }
  csv_meta(out, meta);
  out << "model,n,status,j_star,m_hat,sigma2_hat,residual,gls_mean,brackets\n";
  out << rec.model << ',' << rec.n << ',' << to_string(rec.status) << ',' << cell(rec.j_star) << ','
      << cell(rec.m_hat) << ',' << cell(rec.sigma2_hat) << ',' << cell(rec.residual) << ',' << cell(rec.gls_mean)
      << ',' << brackets_cell(rec.brackets) << '\n';
}

void write_validation(std::ostream& out, const CltSequence& seq, const std::optional<KsResult>& ks,
                      Format format, const Metadata& meta) {
  if (format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& a : seq.attempts) {
      ordered_json row{{"t", a.t}};
      if (a.sample) {
        const auto& s = *a.sample;
        row["j_star"] = s.j_star;
        row["m_hat"] = s.m_hat;
        row["sigma2_hat"] = s.sigma2_hat;
        row["observed"] = s.observed;
        row["u"] = s.u;
        row["observed_coordinate"] = s.observed_coordinate;
        row["rounding_offset"] = s.rounding_offset;
        row["residual"] = s.residual;
        row["status"] = "ok";
      } else {
        row["status"] = a.error;
      }
      rows.push_back(std::move(row));
    }
    ordered_json summary{{"k_attempted", seq.attempts.size()}, {"k_used", seq.used()}, {"k_failed", seq.failed()}};
    summary["D"] = ks ? ordered_json(ks->d_stat) : ordered_json(nullptr);
    summary["p_value"] = ks ? ordered_json(ks->p_value) : ordered_json(nullptr);
    out << ordered_json{{"meta", meta_json(meta)}, {"rows", rows}, {"summary", summary}}.dump(2) << '\n';
    return;
  }
  csv_meta(out, meta);
  out << "t,j_star,m_hat,sigma2_hat,observed,u,status\n";
  for (const auto& a : seq.attempts) {
    out << a.t << ',';
    if (a.sample) {
      const auto& s = *a.sample;
      out << format_double(s.j_star) << ',' << format_double(s.m_hat) << ',' << format_double(s.sigma2_hat) << ','
          << format_double(s.observed) << ',' << format_double(s.u) << ",ok\n";
    } else {
      std::string reason = a.error;
      for (char& c : reason) {
        if (c == ',' || c == '\n') c = ' ';
      }
      out << ",,,,," << reason << '\n';
    }
  }
  out << "# summary k_attempted=" << seq.attempts.size() << " k_used=" << seq.used() << " k_failed=" << seq.failed()
      << " D=" << (ks ? format_double(ks->d_stat) : "") << " p_value=" << (ks ? format_double(ks->p_value) : "")
      << '\n';
}

void write_plot_data(std::ostream& out, const CltSequence& seq, Format format, const Metadata& meta) {
  if (format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& a : seq.attempts) {
      rows.push_back(ordered_json{{"t", a.t},
                                  {"j_star", a.sample ? ordered_json(a.sample->j_star) : ordered_json(nullptr)},
                                  {"m_hat", a.sample ? ordered_json(a.sample->m_hat) : ordered_json(nullptr)},
                                  {"gls_mean", value(a.gls_mean)}});
    }
    out << ordered_json{{"meta", meta_json(meta)}, {"rows", rows}}.dump(2) << '\n';
    return;
  }
  csv_meta(out, meta);
  out << "t,j_star,m_hat,gls_mean\n";
  for (const auto& a : seq.attempts) {
    out << a.t << ',' << (a.sample ? format_double(a.sample->j_star) : "") << ','
        << (a.sample ? format_double(a.sample->m_hat) : "") << ',' << cell(a.gls_mean) << '\n';
  }
}

void write_series(std::ostream& out, const std::vector<double>& values, const Metadata& meta) {
  csv_meta(out, meta);
  out << "value\n";
  for (double v : values) out << format_double(v) << '\n';
}

void write_error(std::ostream& out, const std::string& module, const std::string& kind, const std::string& message,
                 const Metadata& meta) {
  const ordered_json doc{{"error", ordered_json{{"module", module}, {"kind", kind}, {"message", message}}},
                         {"command", meta.command},
                         {"config", meta.config}};
  out << doc.dump() << '\n';
}

}  // namespace krigmv::report
