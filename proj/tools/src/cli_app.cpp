#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qagarch/baselines.hpp"
#include "qagarch/errors.hpp"
#include "qagarch/likelihood.hpp"
#include "qagarch/localization.hpp"
#include "qagarch/mc_bench.hpp"
#include "qagarch/model.hpp"
#include "qagarch/quad_estimator.hpp"
#include "qagarch/series_io.hpp"
#include "svg_plot.hpp"

#ifndef QAGARCH_DEFAULT_DATA_DIR
#define QAGARCH_DEFAULT_DATA_DIR "data"
#endif

namespace qagarch::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 1;
  bool csv = false;
  std::size_t jobs = 1;
  bool verbose = false;
};

class Context {
 public:
  Context(const GlobalOptions& global, std::ostream& out, std::ostream& err)
      : global_(global), out_(out), err_(err) {}

  [[nodiscard]] const GlobalOptions& global() const { return global_; }
  [[nodiscard]] std::ostream& out() const { return out_; }
  [[nodiscard]] std::ostream& err() const { return err_; }
  /// Human-readable text: stderr whenever stdout carries CSV.
  [[nodiscard]] std::ostream& human(bool csv_on_stdout) const { return csv_on_stdout ? err_ : out_; }
  void log(const std::string& msg) const {
    if (global_.verbose) err_ << "[qagarch] " << msg << '\n';
  }

 private:
  const GlobalOptions& global_;
  std::ostream& out_;
  std::ostream& err_;
};

struct ModelFlags {
  std::optional<std::size_t> p;
  std::optional<std::size_t> q;
  std::optional<double> omega;
  std::vector<double> alphas;
  std::vector<double> betas;
};

void add_order_flags(CLI::App* sub, ModelFlags& flags) {
  sub->add_option("--p", flags.p, "Number of ARCH coefficients alpha_1..alpha_p");
  sub->add_option("--q", flags.q, "Number of GARCH coefficients beta_1..beta_q");
}

void add_theta_flags(CLI::App* sub, ModelFlags& flags) {
  add_order_flags(sub, flags);
  sub->add_option("--omega", flags.omega, "Constant term omega > 0");
  sub->add_option("--alpha", flags.alphas, "ARCH coefficients (repeatable or space separated)");
  sub->add_option("--beta", flags.betas, "GARCH coefficients (repeatable or space separated)");
}

GarchOrder resolve_order(const ModelFlags& flags, const GarchOrder& fallback) {
  GarchOrder order = fallback;
  if (flags.p) order.p = *flags.p;
  if (flags.q) order.q = *flags.q;
  order.validate();
  return order;
}

ParamVector resolve_theta(const ModelFlags& flags) {
  if (!flags.omega) throw InvalidInput("--omega is required");
  if (flags.alphas.empty()) throw InvalidInput("at least one --alpha is required");
  const GarchOrder order = resolve_order(flags, GarchOrder{flags.alphas.size(), flags.betas.size()});
  if (order.p != flags.alphas.size() || order.q != flags.betas.size()) {
    throw InvalidInput("--p/--q do not match the number of --alpha/--beta values");
  }
  ParamVector theta(*flags.omega, flags.alphas, flags.betas);
  if (!in_stationarity_set(theta)) {
    std::ostringstream msg;
    msg << "parameters are outside the stationarity set: need omega > 0, coefficients >= 0 and "
           "sum(alpha) + sum(beta) < 1 (got "
        << theta.persistence() << ")";
    throw InvalidInput(msg.str());
  }
  return theta;
}

void add_localization_flags(CLI::App* sub, LocalizationConfig& config) {
  sub->add_option("--omega-step", config.omega_scan_step, "Step of the omega scan")->capture_default_str();
  sub->add_option("--width-tol", config.width_tol, "Stop once every box width is below this")
      ->capture_default_str();
  sub->add_option("--floor", config.lower_floor, "Lower bound of every coordinate")->capture_default_str();
  sub->add_option("--ceiling", config.alpha_beta_ceiling, "Upper bound of alpha and beta")
      ->capture_default_str();
  sub->add_option("--probe", config.probe_value, "Coefficient value used during the omega scan")
      ->capture_default_str();
  sub->add_option("--max-iterations", config.max_iterations, "Scan steps / bisection sweeps limit")
      ->capture_default_str();
}

void add_optimizer_flags(CLI::App* sub, OptimizerConfig& config) {
  sub->add_option("--max-evals", config.max_evals, "Objective evaluation budget of the baselines")
      ->capture_default_str();
  sub->add_option("--f-tol", config.f_tol, "Function tolerance of the baselines")->capture_default_str();
  sub->add_option("--x-tol", config.x_tol, "Step tolerance of the baselines")->capture_default_str();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string short_num(double v) {
  std::ostringstream s;
  s << std::setprecision(7) << v;
  return s.str();
}

/// Directory to write into: created if missing, rejected if it is a file.
void prepare_out_dir(const fs::path& dir) {
  if (fs::exists(dir) && !fs::is_directory(dir)) {
    throw InvalidInput("output path " + dir.string() + " exists and is not a directory");
  }
  fs::create_directories(dir);
}

void check_writable_file(const fs::path& file) {
  const fs::path parent = file.has_parent_path() ? file.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) {
    throw InvalidInput("directory of output file " + file.string() + " does not exist");
  }
  if (fs::is_directory(file)) throw InvalidInput("output path " + file.string() + " is a directory");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

// ---------------------------------------------------------------- tables

std::string scan_csv(const OmegaScan& scan) {
  std::ostringstream s;
  s << "omega,derivative\n";
  for (const auto& row : scan.table) s << format_full(row.omega) << ',' << format_full(row.derivative) << '\n';
  return s.str();
}

std::string box_csv(const std::vector<std::string>& names, const std::optional<SearchBox>& box) {
  std::ostringstream s;
  s << "coordinate,lower,upper\n";
  if (box) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      s << names[i] << ',' << format_full(box->lower[i]) << ',' << format_full(box->upper[i]) << '\n';
    }
  }
  return s.str();
}

std::string cut_csv(const std::vector<std::string>& names, const std::optional<DiagonalCut>& cut) {
  std::ostringstream s;
  s << join(names, ",") << ",nll\n";
  if (cut) {
    for (std::size_t j = 0; j < cut->points.size(); ++j) {
      for (double v : cut->points[j]) s << format_full(v) << ',';
      s << format_full(cut->values[j]) << '\n';
    }
  }
  return s.str();
}

std::string fits_csv(const std::vector<std::string>& names, const std::vector<QuadraticFit>& fits) {
  std::ostringstream s;
  s << "coordinate,a0,a1,a2,rss,vertex\n";
  for (const auto& fit : fits) {
    s << names.at(fit.coordinate_index) << ',' << format_full(fit.a0) << ',' << format_full(fit.a1) << ','
      << format_full(fit.a2) << ',' << format_full(fit.rss) << ','
      << (fit.convex() ? format_full(-fit.a1 / (2.0 * fit.a2)) : std::string("nan")) << '\n';
  }
  return s.str();
}

std::string estimate_csv(const std::vector<std::string>& names, const EstimationResult& result) {
  std::ostringstream s;
  s << "method," << join(names, ",") << ",objective,evaluations,flags\n";
  s << method_name(result.method);
  for (double v : result.theta_hat.flatten()) s << ',' << format_full(v);
  s << ',' << format_full(result.objective_at_estimate) << ',' << result.evaluations << ','
    << csv_field(join(result.flags, "; ")) << '\n';
  return s.str();
}

std::string terms_csv(const TimeSeries& series, const ParamVector& theta) {
  const InitPolicy policy;
  const auto sigma2 = conditional_variances(series, theta, policy);
  const auto objective = quasi_nll(series, theta, policy, true);
  const std::size_t skip = policy.resolved_skip(theta.order());
  std::ostringstream s;
  s << "t,sigma2,q_t\n";
  for (std::size_t k = 0; k < objective.terms.size(); ++k) {
    const std::size_t t = skip + k + 1;
    s << t << ',' << format_full(sigma2[t - 1]) << ',' << format_full(objective.terms[k]) << '\n';
  }
  return s.str();
}

/// Minimal reader for the CSV files this tool writes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidInput("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + " is empty");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw InvalidInput(path.string() + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

double to_double(const std::string& cell, const fs::path& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(where.string() + ": '" + cell + "' is not a number");
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  ModelFlags model;
  std::size_t n = 100;
  std::size_t burn_in = kDefaultBurnIn;
  std::optional<fs::path> out;
};

int cmd_simulate(const Context& ctx, const SimulateOptions& opt) {
  const ParamVector theta = resolve_theta(opt.model);
  if (opt.n == 0) throw InvalidInput("--n must be positive");
  if (opt.out) check_writable_file(*opt.out);
  ctx.log("simulating n=" + std::to_string(opt.n) + " seed=" + std::to_string(ctx.global().seed));

  const TimeSeries series = simulate(theta, opt.n, ctx.global().seed, opt.burn_in);
  const bool to_stdout = !opt.out;
  if (opt.out) {
    write_series_csv(*opt.out, series);
  } else {
    write_series_csv(ctx.out(), series);
  }
  auto& h = ctx.human(to_stdout || ctx.global().csv);
  h << "n = " << series.size() << ", sample mean = " << short_num(series.mean())
    << ", sample variance = " << short_num(series.sample_variance())
    << ", theoretical variance = " << short_num(unconditional_variance(theta)) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- localize

struct LocalizeOptions {
  fs::path input;
  ModelFlags model;
  LocalizationConfig localization;
  std::optional<fs::path> out_dir;
};

int cmd_localize(const Context& ctx, const LocalizeOptions& opt) {
  const TimeSeries series = read_series_csv(opt.input);
  const GarchOrder order = resolve_order(opt.model, GarchOrder{1, 0});
  opt.localization.validate();
  if (opt.out_dir) prepare_out_dir(*opt.out_dir);

  const auto objective = make_quasi_nll(series, order);
  const auto scan = find_omega_bar(objective, opt.localization);
  if (scan.degenerate) ctx.err() << "warning: omega scan stopped at the floor (degenerate series)\n";
  const auto located = localize(objective, scan.omega_bar, opt.localization);
  if (!located.converged) ctx.err() << "warning: localization hit --max-iterations\n";
  const auto names = coordinate_names(order);

  const std::string scan_text = scan_csv(scan);
  const std::string box_text = box_csv(names, located.box);
  if (opt.out_dir) {
    write_text(*opt.out_dir / "scan.csv", scan_text);
    write_text(*opt.out_dir / "box.csv", box_text);
  }
  if (ctx.global().csv) ctx.out() << box_text;

  auto& h = ctx.human(ctx.global().csv);
  h << "omega scan (derivative of the objective in omega):\n";
  for (const auto& row : scan.table) {
    h << "  omega = " << std::setw(8) << short_num(row.omega) << "  derivative = " << short_num(row.derivative)
      << '\n';
  }
  h << "omega_bar = " << short_num(scan.omega_bar) << '\n';
  h << "box after " << located.sweeps << " sweeps:\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    h << "  " << names[i] << " in [" << short_num(located.box.lower[i]) << ", "
      << short_num(located.box.upper[i]) << "]\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  fs::path input;
  ModelFlags model;
  std::string method = "quadfit";
  QuadFitConfig quadfit;
  OptimizerConfig optimizer;
  std::optional<fs::path> out_dir;
  std::optional<fs::path> dump_terms;
};

int cmd_estimate(const Context& ctx, const EstimateOptions& opt) {
  const Method method = parse_method(opt.method);
  const TimeSeries series = read_series_csv(opt.input);
  const GarchOrder order = resolve_order(opt.model, GarchOrder{1, 0});
  opt.quadfit.localization.validate();
  opt.optimizer.validate();
  if (opt.quadfit.m < 3) throw InvalidInput("--m must be at least 3");
  if (opt.out_dir) prepare_out_dir(*opt.out_dir);
  if (opt.dump_terms) check_writable_file(*opt.dump_terms);

  ctx.log("estimating " + std::string(method_name(method)) + " on " + std::to_string(series.size()) +
          " observations");
  const EstimationResult result = run_method(method, series, order, opt.quadfit, opt.optimizer);
  const auto names = coordinate_names(order);
  const std::string estimate_text = estimate_csv(names, result);

  if (opt.out_dir) {
    write_text(*opt.out_dir / "estimate.csv", estimate_text);
    write_text(*opt.out_dir / "box.csv", box_csv(names, result.box));
    write_text(*opt.out_dir / "cut.csv", cut_csv(names, result.cut));
    write_text(*opt.out_dir / "fits.csv", fits_csv(names, result.fits));
  }
  if (opt.dump_terms) write_text(*opt.dump_terms, terms_csv(series, result.theta_hat));
  if (ctx.global().csv) ctx.out() << estimate_text;

  auto& h = ctx.human(ctx.global().csv);
  h << "method: " << method_name(method) << '\n';
  if (result.scan) h << "omega_bar = " << short_num(result.scan->omega_bar) << '\n';
  if (result.box) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      h << "box " << names[i] << " in [" << short_num(result.box->lower[i]) << ", "
        << short_num(result.box->upper[i]) << "]\n";
    }
  }
  for (const auto& fit : result.fits) {
    h << "fit " << names[fit.coordinate_index] << ": " << short_num(fit.a2) << " x^2 + " << short_num(fit.a1)
      << " x + " << short_num(fit.a0) << '\n';
  }
  const auto theta = result.theta_hat.flatten();
  for (std::size_t i = 0; i < names.size(); ++i) h << names[i] << "_hat = " << short_num(theta[i]) << '\n';
  h << "objective = " << short_num(result.objective_at_estimate) << '\n';
  for (const auto& flag : result.flags) ctx.err() << "warning: " << flag << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- benchmark

struct BenchmarkOptions {
  ModelFlags model;
  std::vector<std::size_t> sizes{100, 200, 300};
  std::size_t reps = 1000;
  std::vector<std::string> methods{"quadfit", "nelder-mead", "bfgs"};
  std::optional<fs::path> out;
  QuadFitConfig quadfit;
  OptimizerConfig optimizer;
};

int cmd_benchmark(const Context& ctx, const BenchmarkOptions& opt) {
  std::vector<ParamVector> truths;
  if (opt.model.omega) {
    truths.push_back(resolve_theta(opt.model));
  } else {
    truths = {ParamVector(1.2, {0.6}), ParamVector(0.7, {0.4})};
  }
  std::vector<Method> methods;
  for (const auto& name : opt.methods) methods.push_back(parse_method(name));
  if (opt.sizes.empty()) throw InvalidInput("--n needs at least one sample size");
  if (opt.reps == 0) throw InvalidInput("--reps must be positive");
  if (ctx.global().jobs == 0) throw InvalidInput("--jobs must be positive");
  if (opt.out) check_writable_file(*opt.out);

  std::vector<Scenario> scenarios;
  for (const auto& truth : truths) {
    for (std::size_t n : opt.sizes) {
      Scenario s;
      s.true_theta = truth;
      s.n = n;
      s.replications = opt.reps;
      s.master_seed = ctx.global().seed;
      scenarios.push_back(s);
    }
  }
  ctx.log("running " + std::to_string(scenarios.size()) + " scenarios x " + std::to_string(opt.reps) +
          " replications on " + std::to_string(ctx.global().jobs) + " threads");
  StudyOptions study;
  study.jobs = ctx.global().jobs;
  study.quadfit = opt.quadfit;
  study.optimizer = opt.optimizer;
  const auto result = run_rmse_study(scenarios, methods, study);

  const auto names = coordinate_names(truths.front().order());
  std::ostringstream csv;
  csv << "scenario,method,n";
  for (const auto& name : names) csv << ",rmse_" << name;
  csv << ",combined,failures\n";
  for (const auto& report : result.reports) {
    std::string label;
    const auto flat = report.scenario.true_theta.flatten();
    const auto labels = coordinate_names(report.scenario.true_theta.order());
    for (std::size_t i = 0; i < flat.size(); ++i) label += (i ? " " : "") + labels[i] + "=" + short_num(flat[i]);
    csv << label << ',' << method_name(report.method) << ',' << report.scenario.n;
    for (double v : report.rmse_per_coordinate) csv << ',' << format_full(v);
    csv << ',' << format_full(report.combined) << ',' << report.failures << '\n';
  }
  if (opt.out) write_text(*opt.out, csv.str());
  if (ctx.global().csv) ctx.out() << csv.str();

  auto& h = ctx.human(ctx.global().csv);
  h << std::left << std::setw(26) << "scenario" << std::setw(13) << "method" << std::setw(6) << "n"
    << std::setw(12) << "combined" << std::setw(10) << "+/- se" << "failures\n";
  for (const auto& report : result.reports) {
    std::string label;
    const auto flat = report.scenario.true_theta.flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) label += (i ? ", " : "(") + short_num(flat[i]);
    label += ")";
    h << std::left << std::setw(26) << label << std::setw(13) << method_name(report.method) << std::setw(6)
      << report.scenario.n << std::setw(12) << std::fixed << std::setprecision(4) << report.combined
      << std::setw(10) << report.combined_std_error << report.failures << '\n';
    h << std::defaultfloat << std::setprecision(6);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- plot

struct PlotOptions {
  std::optional<fs::path> input;
  std::optional<fs::path> estimate_dir;
  fs::path out_dir;
};

Plot series_plot(const TimeSeries& series) {
  Plot plot;
  plot.title = "Observed series";
  plot.x_label = "t";
  plot.y_label = "x";
  PlotSeries line;
  for (std::size_t t = 0; t < series.size(); ++t) {
    line.xs.push_back(static_cast<double>(t + 1));
    line.ys.push_back(series[t]);
  }
  plot.series.push_back(std::move(line));
  return plot;
}

std::vector<std::pair<std::string, Plot>> cut_plots(const fs::path& dir) {
  const fs::path cut_path = dir / "cut.csv";
  const fs::path fits_path = dir / "fits.csv";
  if (!fs::exists(cut_path) || !fs::exists(fits_path)) {
    throw InvalidInput(dir.string() + " does not contain cut.csv and fits.csv from a quadfit estimate");
  }
  const Table cut = read_table(cut_path);
  const Table fits = read_table(fits_path);
  if (cut.rows.empty() || fits.rows.empty()) {
    throw InvalidInput(dir.string() + " holds no diagonal cut (only quadfit estimates produce one)");
  }
  const std::size_t nll_col = cut.column("nll");
  std::vector<std::pair<std::string, Plot>> plots;
  for (const auto& row : fits.rows) {
    const std::string& name = row.at(fits.column("coordinate"));
    const std::size_t col = cut.column(name);
    const double a0 = to_double(row.at(fits.column("a0")), fits_path);
    const double a1 = to_double(row.at(fits.column("a1")), fits_path);
    const double a2 = to_double(row.at(fits.column("a2")), fits_path);

    Plot plot;
    plot.title = "Projected cut of the objective on " + name;
    plot.x_label = name;
    plot.y_label = "negative quasi log-likelihood";
    PlotSeries points;
    points.style = PlotSeries::Style::Points;
    points.label = "cut";
    for (const auto& c : cut.rows) {
      points.xs.push_back(to_double(c.at(col), cut_path));
      points.ys.push_back(to_double(c.at(nll_col), cut_path));
    }
    const auto [lo, hi] = std::minmax_element(points.xs.begin(), points.xs.end());
    PlotSeries parabola;
    parabola.color = "#ff7f0e";
    parabola.label = "least-squares parabola";
    for (int k = 0; k <= 200; ++k) {
      const double x = *lo + (*hi - *lo) * k / 200.0;
      parabola.xs.push_back(x);
      parabola.ys.push_back(a0 + x * (a1 + x * a2));
    }
    plot.series.push_back(std::move(points));
    plot.series.push_back(std::move(parabola));
    if (a2 > 0.0) {
      const double v = -a1 / (2.0 * a2);
      plot.markers.push_back({v, "vertex " + short_num(v)});
    }
    plots.emplace_back("cut_" + name + ".svg", std::move(plot));
  }
  return plots;
}

int cmd_plot(const Context& ctx, const PlotOptions& opt) {
  if (!opt.input && !opt.estimate_dir) throw InvalidInput("plot needs --input and/or --estimate-dir");
  // Render everything in memory first so a failure leaves no partial output.
  std::vector<std::pair<std::string, std::string>> files;
  if (opt.input) files.emplace_back("series.svg", render_svg(series_plot(read_series_csv(*opt.input))));
  if (opt.estimate_dir) {
    if (!fs::is_directory(*opt.estimate_dir)) {
      throw InvalidInput("--estimate-dir " + opt.estimate_dir->string() + " is not a directory");
    }
    for (const auto& [file, plot] : cut_plots(*opt.estimate_dir)) files.emplace_back(file, render_svg(plot));
  }
  prepare_out_dir(opt.out_dir);
  for (const auto& [file, svg] : files) {
    write_text(opt.out_dir / file, svg);
    ctx.human(ctx.global().csv) << "wrote " << (opt.out_dir / file).string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- reproduce-paper

struct ReproduceOptions {
  fs::path data_dir = QAGARCH_DEFAULT_DATA_DIR;
};

struct Check {
  std::string name;
  double measured;
  double target;
  double tolerance;
  bool relative;
  bool at_most = false;

  [[nodiscard]] bool pass() const {
    if (at_most) return measured <= target;
    const double bound = relative ? tolerance * std::fabs(target) : tolerance;
    return std::fabs(measured - target) <= bound;
  }
  [[nodiscard]] std::string tolerance_text() const {
    if (at_most) return "at most " + short_num(target);
    return "+/- " + (relative ? short_num(100.0 * tolerance) + "%" : short_num(tolerance));
  }
};

int cmd_reproduce(const Context& ctx, const ReproduceOptions& opt) {
  const fs::path series_path = opt.data_dir / "arch1_paper.csv";
  const fs::path cut_path = opt.data_dir / "arch1_paper_cut.csv";
  const TimeSeries series = read_series_csv(series_path);
  const Table printed = read_table(cut_path);
  if (printed.rows.size() != 100) throw InvalidInput(cut_path.string() + " should hold the 100 printed rows");
  const GarchOrder order{1, 0};

  std::vector<Check> checks;
  const double scan_omegas[] = {0.0001, 0.2001, 0.4001, 0.6001, 0.8001};
  const double scan_printed[] = {-7613853.0, -455.4789, -93.72643, -19.2947, 5.967303};
  for (int k = 0; k < 5; ++k) {
    const double g = quasi_nll_gradient(series, ParamVector(scan_omegas[k], {0.5}))[0];
    checks.push_back({"d/domega at (" + short_num(scan_omegas[k]) + ", 0.5)", g, scan_printed[k], 0.005, true});
  }

  std::vector<double> cut_w, cut_a, cut_v;
  for (const auto& row : printed.rows) {
    cut_w.push_back(to_double(row.at(0), cut_path));
    cut_a.push_back(to_double(row.at(1), cut_path));
    cut_v.push_back(to_double(row.at(2), cut_path));
  }
  std::vector<std::size_t> spot{0, 9, 19, 29, 39, 49, 59, 69, 79, 89, 99};
  for (std::size_t j = 0; j < cut_w.size(); ++j) {
    if (std::fabs(cut_w[j] - 0.8001) < 5e-5) spot.push_back(j);
  }
  for (std::size_t j : spot) {
    const double v = quasi_nll(series, ParamVector(cut_w[j], {cut_a[j]})).value;
    checks.push_back({"objective at (" + short_num(cut_w[j]) + ", " + short_num(cut_a[j]) + ")", v, cut_v[j],
                      0.01, false});
  }

  const auto scan = find_omega_bar(series, order);
  const auto box = localize(series, order, scan.omega_bar).box;
  const std::vector<double> peak{0.8007, 0.3132};
  checks.push_back({"box contains (0.8007, 0.3132)", box.contains(peak) ? 1.0 : 0.0, 1.0, 0.0, false});
  checks.push_back({"box width omega", box.width(0), 0.09, 0.0, false, true});
  checks.push_back({"box width alpha1", box.width(1), 0.09, 0.0, false, true});

  const auto fit_w = fit_quadratic(cut_w, cut_v, 0);
  const auto fit_a = fit_quadratic(cut_a, cut_v, 1);
  checks.push_back({"omega fit a2", fit_w.a2, 143.7092, 0.01, true});
  checks.push_back({"omega fit a1", fit_w.a1, -230.1460, 0.01, true});
  checks.push_back({"alpha1 fit a2", fit_a.a2, 120.8546, 0.01, true});
  checks.push_back({"alpha1 fit a1", fit_a.a1, -75.7028, 0.01, true});
  checks.push_back({"omega vertex of the printed cut", vertex(fit_w), 0.8007353, 0.01, false});

  const auto estimate_result = estimate(series, order);
  checks.push_back({"omega_hat from the bundled series", estimate_result.theta_hat.omega, 0.8007353, 0.01, false});

  bool all = true;
  std::ostringstream csv;
  csv << "check,measured,target,tolerance,status\n";
  auto& h = ctx.human(ctx.global().csv);
  for (const auto& c : checks) {
    const bool ok = c.pass();
    all = all && ok;
    csv << csv_field(c.name) << ',' << format_full(c.measured) << ',' << format_full(c.target) << ','
        << c.tolerance_text() << ',' << (ok ? "PASS" : "FAIL") << '\n';
    h << (ok ? "PASS " : "FAIL ") << c.name << ": measured " << short_num(c.measured) << ", ";
    if (c.at_most) {
      h << c.tolerance_text() << '\n';
    } else {
      h << "target " << short_num(c.target) << ' ' << c.tolerance_text() << '\n';
    }
  }
  if (ctx.global().csv) ctx.out() << csv.str();
  h << (all ? "all checks passed" : "some checks failed") << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-likelihood estimation of GARCH(p,q) models", "qagarch"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for simulation and Monte Carlo runs")->capture_default_str();
  app.add_flag("--csv", global.csv, "Write the main CSV result to stdout");
  app.add_option("--jobs", global.jobs, "Worker threads for benchmark")->capture_default_str();
  app.add_flag("--verbose", global.verbose, "Progress messages on stderr");

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a GARCH(p,q) path as t,x CSV");
  add_theta_flags(simulate_cmd, sim.model);
  simulate_cmd->add_option("--n", sim.n, "Number of observations")->capture_default_str();
  simulate_cmd->add_option("--burn-in", sim.burn_in, "Discarded initial draws")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output CSV (default: stdout)");

  LocalizeOptions loc;
  auto* localize_cmd = app.add_subcommand("localize", "Omega scan and bisection box");
  localize_cmd->add_option("--input", loc.input, "Series CSV (t,x)")->required()->check(CLI::ExistingFile);
  add_order_flags(localize_cmd, loc.model);
  add_localization_flags(localize_cmd, loc.localization);
  localize_cmd->add_option("--out-dir", loc.out_dir, "Write scan.csv and box.csv here");

  EstimateOptions est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate theta from a series");
  estimate_cmd->add_option("--input", est.input, "Series CSV (t,x)")->required()->check(CLI::ExistingFile);
  add_order_flags(estimate_cmd, est.model);
  estimate_cmd->add_option("--method", est.method, "quadfit, nelder-mead or bfgs")
      ->check(CLI::IsMember({"quadfit", "nelder-mead", "bfgs"}))
      ->capture_default_str();
  estimate_cmd->add_option("--m", est.quadfit.m, "Points on the diagonal cut")->capture_default_str();
  add_localization_flags(estimate_cmd, est.quadfit.localization);
  add_optimizer_flags(estimate_cmd, est.optimizer);
  estimate_cmd->add_option("--out-dir", est.out_dir, "Write estimate.csv, box.csv, cut.csv, fits.csv here");
  estimate_cmd->add_option("--dump-terms", est.dump_terms, "Write t,sigma2,q_t at the estimate to this CSV");

  BenchmarkOptions bench;
  auto* benchmark_cmd = app.add_subcommand("benchmark", "Monte Carlo RMSE study");
  add_theta_flags(benchmark_cmd, bench.model);
  benchmark_cmd->add_option("--n", bench.sizes, "Sample sizes")->capture_default_str();
  benchmark_cmd->add_option("--reps", bench.reps, "Replications per scenario")->capture_default_str();
  benchmark_cmd->add_option("--methods", bench.methods, "Methods to compare")
      ->check(CLI::IsMember({"quadfit", "nelder-mead", "bfgs"}))
      ->capture_default_str();
  benchmark_cmd->add_option("--out", bench.out, "Output CSV");
  add_optimizer_flags(benchmark_cmd, bench.optimizer);

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "SVG plots of a series and of an estimate's cut");
  plot_cmd->add_option("--input", plot.input, "Series CSV (t,x)")->check(CLI::ExistingFile);
  plot_cmd->add_option("--estimate-dir", plot.estimate_dir, "Directory written by estimate --out-dir");
  plot_cmd->add_option("--out-dir", plot.out_dir, "Where to write the SVG files")->required();

  ReproduceOptions repro;
  auto* reproduce_cmd =
      app.add_subcommand("reproduce-paper", "Check the ARCH(1) worked example against its printed values");
  reproduce_cmd->add_option("--data-dir", repro.data_dir, "Directory with arch1_paper*.csv")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  const Context ctx(global, out, err);
  try {
    if (*simulate_cmd) return cmd_simulate(ctx, sim);
    if (*localize_cmd) return cmd_localize(ctx, loc);
    if (*estimate_cmd) return cmd_estimate(ctx, est);
    if (*benchmark_cmd) return cmd_benchmark(ctx, bench);
    if (*plot_cmd) return cmd_plot(ctx, plot);
    if (*reproduce_cmd) return cmd_reproduce(ctx, repro);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace qagarch::cli
