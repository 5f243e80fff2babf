#include "krigmv/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "krigmv/corrmodel.hpp"
#include "krigmv/empirical.hpp"
#include "krigmv/error.hpp"
#include "krigmv/estimator.hpp"
#include "krigmv/format.hpp"
#include "krigmv/report.hpp"
#include "krigmv/series.hpp"
#include "krigmv/simulate.hpp"
#include "krigmv/validate.hpp"

namespace krigmv::cli {

namespace {

constexpr const char* kModule = "cli";

report::Format parse_format(const std::string& format) {
  if (format == "csv") return report::Format::csv;
  if (format == "json") return report::Format::json;
  throw UsageError(kModule, "format must be csv or json, got '" + format + "'");
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::data: return "data";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kUsageError;
    case ErrorKind::data: return kDataError;
    case ErrorKind::numerical: return kNumericalFailure;
  }
  return kNumericalFailure;
}

// Writes to the configured file, or to `fallback` when the path is empty.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& writer) {
  if (path.empty()) {
    writer(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError(kModule, "cannot open output '" + path + "'");
  writer(file);
  if (!file) throw DataError(kModule, "write to '" + path + "' failed");
}

Series load_input(const RunConfig& c) {
  if (c.input.empty()) throw UsageError(kModule, "--input is required for " + c.command);
  return load_csv(c.input, c.column);
}

std::span<const double> window_prefix(const Series& series, const RunConfig& c, std::size_t minimum) {
  const std::size_t n = c.n.value_or(series.size());
  if (n < minimum || n > series.size()) {
    throw UsageError(kModule, "--n=" + std::to_string(n) + " must lie in " + std::to_string(minimum) + ".." +
                                  std::to_string(series.size()));
  }
  return series.prefix(n);
}

int run_variogram(const RunConfig& c, const report::Metadata& meta, std::ostream& out) {
  const auto series = load_input(c);
  const auto data = window_prefix(series, c, 2);
  const auto table = variogram_table(data);
  const auto format = parse_format(c.format);
  emit(c.output, out, [&](std::ostream& os) { report::write_variogram(os, table, format, meta); });
  return kSuccess;
}

int run_estimate(const RunConfig& c, const report::Metadata& meta, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(c.format);
  if (c.model.empty()) throw UsageError(kModule, "--model is required for estimate");
  const auto model = CorrelationModel::parse(c.model);
  const auto series = load_input(c);
  const auto data = window_prefix(series, c, 1);

  ConstraintOptions options;
  options.j_max = c.j_max;
  options.tol = c.tol;
  options.gls_fallback = c.gls_fallback;
  const auto outcome = solve_constraint(model, data, options);

  report::EstimateRecord rec;
  rec.model = model.to_string();
  rec.n = data.size();
  rec.status = outcome.status;
  rec.brackets = outcome.brackets;
  rec.message = outcome.message;
  rec.j_star = outcome.j_root;
  try {
    rec.gls_mean = outcome.gls_mean ? outcome.gls_mean : std::optional<double>(gls_mean(model, data));
  } catch (const SingularMatrixError&) {
  }
  if (outcome.moments_at_root) {
    rec.m_hat = outcome.moments_at_root->m_hat;
    rec.sigma2_hat = outcome.moments_at_root->sigma2_hat;
  }
  if (outcome.estimate) rec.residual = outcome.estimate->residual;

  emit(c.output, out, [&](std::ostream& os) { report::write_estimate(os, rec, format, meta); });
  if (outcome.solved() || (outcome.status == ConstraintStatus::no_root && c.gls_fallback)) return kSuccess;
  report::write_error(err, "estimator", to_string(outcome.status),
                      outcome.message + " [model=" + rec.model + " n=" + std::to_string(rec.n) + "]", meta);
  return kNumericalFailure;
}

int run_validate(const RunConfig& c, const report::Metadata& meta, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(c.format);
  if (!c.n) throw UsageError(kModule, "--n is required for validate");
  if (c.mode != "root" && c.mode != "fixed") {
    throw UsageError(kModule, "--mode must be root or fixed, got '" + c.mode + "'");
  }
  const auto series = load_input(c);
  const auto window = split(series, *c.n);

  ValidationPlan plan;
  plan.n = *c.n;
  plan.t_first = c.t_start;
  plan.t_last = c.t_end;
  plan.beta = c.beta;
  plan.j_max = c.j_max;
  plan.tol = c.tol;
  plan.mode = c.mode == "root" ? TargetMode::root : TargetMode::fixed;
  plan.threads = c.threads;
  if (!c.model.empty()) plan.model = CorrelationModel::parse(c.model);

  CltSequence seq;
  std::optional<KsResult> ks;
  int status = kSuccess;
  try {
    seq = clt_sequence(window, plan);
    ks = ks_test(seq.u_values());
  } catch (const EmptySampleError& e) {
    seq = e.sequence();
    report::write_error(err, e.module(), kind_name(e.kind()), e.what(), meta);
    status = kNumericalFailure;
  }

  emit(c.output, out, [&](std::ostream& os) { report::write_validation(os, seq, ks, format, meta); });
  if (!c.plot_output.empty()) {
    emit(c.plot_output, out, [&](std::ostream& os) { report::write_plot_data(os, seq, format, meta); });
  }
  if (!c.output.empty() && ks) {
    out << "k_attempted=" << seq.attempts.size() << " k_used=" << seq.used() << " k_failed=" << seq.failed()
        << " D=" << format_double(ks->d_stat) << " p_value=" << format_double(ks->p_value) << '\n';
  }
  return status;
}

int run_simulate(const RunConfig& c, const report::Metadata& meta, std::ostream& out) {
  if (c.model.empty()) throw UsageError(kModule, "--model is required for simulate");
  if (!c.n || *c.n < 1) throw UsageError(kModule, "--n >= 1 is required for simulate");
  SimulationSpec spec;
  spec.model = CorrelationModel::parse(c.model);
  spec.n = *c.n;
  spec.mean = c.mean;
  spec.sigma2 = c.variance;
  spec.seed = c.seed;
  const auto values = gaussian_series(spec);
  emit(c.output, out, [&](std::ostream& os) { report::write_series(os, values, meta); });
  return kSuccess;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream s;
  auto field = [&](const char* key, const std::string& v) { s << key << '=' << v << ';'; };
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  field("command", command);
  if (command != "simulate") {
    field("input", input);
    field("column", opt(column));
  }
  field("n", opt(n));
  if (command == "estimate" || command == "validate" || command == "simulate") field("model", model);
  if (command == "estimate" || command == "validate") {
    field("j_max", format_double(j_max));
    field("tol", format_double(tol));
  }
  if (command == "estimate") field("gls_fallback", gls_fallback ? "1" : "0");
  if (command == "validate") {
    field("t_start", std::to_string(t_start));
    field("t_end", std::to_string(t_end));
    field("beta", format_double(beta));
    field("mode", mode);
  }
  if (command == "simulate") {
    field("mean", format_double(mean));
    field("var", format_double(variance));
    field("seed", std::to_string(seed));
  } else {
    field("format", format);
  }
  return s.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const report::Metadata meta{config.command, config.canonical()};
  try {
    if (config.command == "variogram") return run_variogram(config, meta, out);
    if (config.command == "estimate") return run_estimate(config, meta, out, err);
    if (config.command == "validate") return run_validate(config, meta, out, err);
    if (config.command == "simulate") return run_simulate(config, meta, out);
    throw UsageError(kModule, "unknown subcommand '" + config.command + "'");
  } catch (const Error& e) {
    report::write_error(err, e.module(), kind_name(e.kind()), e.what(), meta);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report::write_error(err, kModule, "internal", e.what(), meta);
    return kNumericalFailure;
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kriging-based mean and variance estimation for stationary series", "krigmv"};
  app.require_subcommand(1);
  RunConfig c;
  std::size_t column = 0;
  std::size_t n = 0;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input,-i", c.input, "CSV file with one value per line")->required();
    sub->add_option("--column", column, "0-based column for multi-column files");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "output file (default stdout)");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--j-max", c.j_max, "upper end of the root search (default 1000*n)");
    sub->add_option("--tol", c.tol, "constraint residual tolerance");
  };

  auto* variogram = app.add_subcommand("variogram", "experimental semivariogram and correlation estimators");
  add_input(variogram);
  variogram->add_option("--n", n, "use the first n values (default all)");
  add_output(variogram);

  auto* estimate = app.add_subcommand("estimate", "solve e(j) = 1 and estimate mean and variance");
  add_input(estimate);
  estimate->add_option("--n", n, "use the first n values (default all)");
  estimate->add_option("--model", c.model, "correlation model, e.g. exponential:a=10")->required();
  add_solver(estimate);
  estimate->add_flag("--gls-fallback", c.gls_fallback, "report the GLS mean when no root exists");
  add_output(estimate);

  auto* validate = app.add_subcommand("validate", "frozen-process residuals and K-S test");
  add_input(validate);
  validate->add_option("--n", n, "data window size")->required();
  validate->add_option("--t-start", c.t_start, "first frozen index (>= n+1)")->required();
  validate->add_option("--t-end", c.t_end, "last frozen index")->required();
  validate->add_option("--beta", c.beta, "frozen_power exponent");
  validate->add_option("--model", c.model, "use this model for every t instead of frozen_power(t, beta)");
  validate->add_option("--mode", c.mode, "root: solve for j; fixed: j = t")->check(CLI::IsMember({"root", "fixed"}));
  add_solver(validate);
  validate->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  validate->add_option("--plot-output", c.plot_output, "write (t, j_star, m_hat, gls_mean) plot data here");
  add_output(validate);

  auto* simulate = app.add_subcommand("simulate", "stationary Gaussian series with a known model");
  simulate->add_option("--model", c.model, "correlation model (positive semidefinite)")->required();
  simulate->add_option("--n", n, "series length")->required();
  simulate->add_option("--mean", c.mean, "true mean");
  simulate->add_option("--var", c.variance, "true variance");
  simulate->add_option("--seed", c.seed, "generator seed");
  simulate->add_option("--output,-o", c.output, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  auto* chosen = app.get_subcommands().front();
  c.command = chosen->get_name();
  if (c.command != "simulate" && chosen->count("--column") > 0) c.column = column;
  if (chosen->count("--n") > 0) c.n = n;
  return run(c, out, err);
}

}  // namespace krigmv::cli
