#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modspace/duhamel.hpp"
#include "modspace/errors.hpp"
#include "modspace/io.hpp"
#include "modspace/norms.hpp"
#include "modspace/parallel.hpp"
#include "modspace/propagators.hpp"
#include "modspace/series.hpp"
#include "modspace/stft.hpp"
#include "modspace/verification.hpp"

#ifndef MODSPACE_VERSION
#define MODSPACE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace modspace;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2 };

// Everything one run produced, written once as manifest.json.
struct Run {
  fs::path out;
  json outputs = json::array();

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return out / name;
  }
};

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

json exponent_json(double e) { return std::isinf(e) ? json("inf") : json(e); }

void require_finite(double v, const std::string& stage) {
  if (!std::isfinite(v)) throw NumericalFailure(stage, "non-finite value");
}

void require_finite(const SampledField& f, const std::string& stage) {
  if (!all_finite(f)) throw NumericalFailure(stage, "non-finite samples");
}

Params parse_params(const std::vector<std::string>& items) {
  Params p;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + item + "'");
    try {
      p[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad numeric value in '" + item + "'");
    }
  }
  return p;
}

struct GridOptions {
  int dim = 1;
  std::size_t n = 512;
  double L = 32.0;
  GridSpec grid() const { return GridSpec(dim, n, L); }
};

void add_grid(CLI::App* sub, GridOptions& g) {
  sub->add_option("--dim", g.dim, "Spatial dimension (1-3)")->capture_default_str();
  sub->add_option("--n", g.n, "Samples per axis (power of two)")->capture_default_str();
  sub->add_option("--L", g.L, "Box extent")->capture_default_str();
}

struct FieldSource {
  std::string fn = "gaussian";
  std::vector<std::string> params;
  std::string input;

  SampledField load(const GridSpec& grid) const {
    if (!input.empty()) return read_field(input);
    return sample_builtin(fn, grid, parse_params(params));
  }
};

void add_field(CLI::App* sub, FieldSource& src) {
  sub->add_option("--fn", src.fn, "Catalog function")->capture_default_str();
  sub->add_option("--param", src.params, "Catalog parameter key=value (repeatable)");
  sub->add_option("--input", src.input, "Field file in the binary container (overrides --fn)");
}

struct NormOptions {
  std::string p = "1", q = "1";
  double s = 0.0;
  ModParams params() const { return {parse_exponent(p), parse_exponent(q), s}; }
};

void add_norm(CLI::App* sub, NormOptions& o) {
  sub->add_option("--p", o.p, "Inner (space) exponent, number or inf")->capture_default_str();
  sub->add_option("--q", o.q, "Outer (frequency) exponent, number or inf")->capture_default_str();
  sub->add_option("--s", o.s, "Frequency weight exponent")->capture_default_str();
}

json norm_record(const ModParams& m, const GridSpec& g, double value) {
  return {{"p", exponent_json(m.p)}, {"q", exponent_json(m.q)}, {"s", m.s}, {"N", g.samples()}, {"L", g.extent()},
          {"value", value}};
}

// --- subcommands ------------------------------------------------------------

struct NormCmd {
  GridOptions grid;
  FieldSource field;
  NormOptions norm;
  std::string window;
  std::vector<std::string> window_params;

  json run(Run& run) const {
    auto g = grid.grid();
    auto f = field.load(g);
    require_finite(f, "input");
    auto params = norm.params();
    params.validate();
    double v = window.empty() ? mod_norm(f, params)
                              : mod_norm(f, sample_builtin(window, f.grid(), parse_params(window_params)), params);
    require_finite(v, "mod_norm");
    json rec = norm_record(params, f.grid(), v);
    write_json(run.file("norm.json"), rec);
    std::cout << rec.dump() << '\n';
    return rec;
  }
};

struct StftCmd {
  GridOptions grid{1, 256, 16.0};
  FieldSource field;
  std::size_t cells = 128;

  json run(Run& run) const {
    auto f = field.load(grid.grid());
    require_finite(f, "input");
    if (f.grid().dim() != 1) throw std::invalid_argument("stft export supports dim 1 only");
    auto V = stft(f, canonical_window(f.grid()), "gaussian");
    double peak = 0.0;
    for (std::size_t j = 0; j < V.rows(); ++j)
      for (std::size_t k = 0; k < V.cols(); ++k) peak = std::max(peak, std::abs(V.at(j, k)));
    require_finite(peak, "stft");
    write_tf_csv(run.file("stft.csv"), V);
    write_spectrogram_svg(run.file("spectrogram.svg"), V, cells);
    json rec = {{"N", f.grid().samples()}, {"L", f.grid().extent()}, {"max_abs", peak}};
    std::cout << rec.dump() << '\n';
    return rec;
  }
};

struct PropagateCmd {
  GridOptions grid;
  FieldSource field;
  NormOptions norm;
  std::string kind = "schrodinger";
  double t = 0.0;
  std::vector<double> times;
  std::uint64_t seed = 7;
  std::size_t battery_size = 20;

  json run(Run& run) const {
    Family fam = family_from_string(kind);
    auto params = norm.params();
    params.validate();
    if (!times.empty()) {
      auto battery = Battery::standard(grid.grid(), seed, battery_size);
      std::vector<SampledField> fields;
      for (std::size_t i : battery.eligible(params)) fields.push_back(battery[i].field);
      auto rep = bound_ratio(fam, times, fields, params);
      for (const auto& row : rep.rows) require_finite(row.ratio, "bound_ratio");
      write_bound_ratio(run.file("bound_ratio.csv"), run.file("bound_ratio.svg"), rep);
      json rows = json::array();
      for (const auto& row : rep.rows) rows.push_back({{"t", row.t}, {"ratio", row.ratio}, {"normalized", row.normalized}});
      json rec = {{"kind", kind}, {"rows", rows}, {"constant", rep.constant}};
      std::cout << rec.dump() << '\n';
      return rec;
    }
    auto f = field.load(grid.grid());
    require_finite(f, "input");
    auto u = apply({fam, t}, f);
    require_finite(u, "propagate");
    double n_in = mod_norm(f, params), n_out = mod_norm(u, params);
    require_finite(n_out, "mod_norm");
    write_field(run.file("propagated.bin"), u);
    write_field_csv(run.file("propagated.csv"), u);
    json rec = {{"kind", kind},
                {"t", t},
                {"norm_in", norm_record(params, f.grid(), n_in)},
                {"norm_out", norm_record(params, f.grid(), n_out)},
                {"max_abs_change", max_abs_difference(u, f)}};
    std::cout << rec.dump() << '\n';
    return rec;
  }
};

struct SolveCmd {
  GridOptions grid;
  NormOptions norm;
  std::string eq = "nls";
  std::string nonlinearity = "cubic";
  std::string u0 = "gaussian";
  std::vector<std::string> u0_params;
  std::string u1;
  std::vector<std::string> u1_params;
  double t_end = 1.0;
  double dt = 1e-3;
  double tol = 1e-10;
  int max_iter = 60;
  double c1 = 1.0;
  double safety = 0.9;
  double cap = 1.0;
  bool snapshots = false;

  RealEntireSeries series() const {
    if (nonlinearity.size() > 5 && nonlinearity.substr(nonlinearity.size() - 5) == ".json") {
      std::ifstream in(nonlinearity);
      if (!in) throw std::invalid_argument("cannot read nonlinearity file " + nonlinearity);
      std::stringstream ss;
      ss << in.rdbuf();
      return RealEntireSeries::from_json(ss.str());
    }
    return RealEntireSeries::preset(nonlinearity);
  }

  json run(Run& run) const {
    auto g = grid.grid();
    Equation e = equation_from_string(eq);
    CauchyData data{e, sample_builtin(u0, g, parse_params(u0_params)), std::nullopt, 0.0};
    if (e != Equation::nls)
      data.u1 = u1.empty() ? SampledField::zeros(g) : sample_builtin(u1, g, parse_params(u1_params));
    else if (!u1.empty())
      throw std::invalid_argument("--u1 applies to nlw and nlkg only");
    require_finite(data.u0, "initial data");
    SolverConfig cfg;
    cfg.F = series();
    cfg.params = norm.params();
    cfg.quadrature_step = dt;
    cfg.picard_tol = tol;
    cfg.picard_max_iter = max_iter;
    cfg.c1 = c1;
    cfg.safety = safety;
    cfg.horizon_cap = cap;
    auto path = continue_solution(data, cfg, t_end);

    std::vector<std::vector<double>> rows;
    std::vector<double> ts, norms;
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      const auto& u = path.states[k];
      require_finite(u, "solve");
      double mn = mod_norm(u, cfg.params);
      double l2 = l2_norm(u);
      // Window statistics belong to the window that ends at this state.
      double T = NAN, contraction = NAN;
      if (k > 0 && k - 1 < path.per_window.size()) {
        T = path.per_window[k - 1].T_used;
        contraction = path.per_window[k - 1].contraction_factor;
      }
      rows.push_back({path.times[k], mn, l2, T, contraction});
      ts.push_back(path.times[k]);
      norms.push_back(mn);
    }
    write_csv(run.file("solve.csv"), {"t", "mod_norm", "L2_norm", "T_window", "contraction_factor"}, rows);
    write_line_plot_svg(run.file("solve.svg"), "modulation norm of the solution", "t", ts, {{"mod_norm", norms}});
    if (snapshots && !path.states.empty()) write_field(run.file("final.bin"), path.states.back());
    json rec = {{"equation", eq},
                {"windows", path.per_window.size()},
                {"t_reached", path.times.empty() ? json(nullptr) : json(path.times.back())},
                {"blow_up", path.blow_up},
                {"blow_up_reason", path.blow_up_reason}};
    write_json(run.file("solution.json"), rec);
    std::cout << rec.dump() << '\n';
    return rec;
  }
};

json details_table(const json& details) {
  if (details.is_object() && details.contains("table")) return details.at("table");
  return nullptr;
}

void write_report_artifacts(Run& run, CheckReport& r, const std::string& stem) {
  json t = details_table(r.details);
  if (t.is_null()) return;
  std::vector<std::string> columns = t.at("columns").get<std::vector<std::string>>();
  std::vector<std::vector<double>> rows;
  for (const auto& row : t.at("rows")) {
    std::vector<double> v;
    for (const auto& x : row) v.push_back(x.is_number() ? x.get<double>() : NAN);
    rows.push_back(v);
  }
  std::string csv = stem + ".csv", svg = stem + ".svg";
  write_csv(run.file(csv), columns, rows);
  std::vector<double> x;
  for (const auto& row : rows) x.push_back(row.empty() ? NAN : row[0]);
  std::vector<PlotSeries> series;
  double lo = INFINITY, hi = 0.0;
  bool positive = true;
  for (std::size_t c = 1; c < columns.size(); ++c) {
    PlotSeries s{columns[c], {}};
    for (const auto& row : rows) {
      double v = c < row.size() ? row[c] : NAN;
      s.y.push_back(v);
      if (std::isfinite(v)) {
        positive = positive && v > 0.0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    series.push_back(std::move(s));
  }
  bool log_y = positive && lo > 0.0 && hi / lo > 1e3;
  write_line_plot_svg(run.file(svg), r.name, columns.empty() ? "" : columns[0], x, series, log_y);
  r.artifacts = {csv, svg};
}

struct VerifyCmd {
  GridOptions grid{1, 512, 8.0};
  std::string suite = "all";
  std::uint64_t seed = 7;
  std::size_t battery_size = 20;

  json run(Run& run) const {
    SuiteOptions opts;
    opts.grid = grid.grid();
    opts.seed = seed;
    opts.battery_size = battery_size;
    auto reports = run_suite(suite, opts);
    json out = json::array();
    std::size_t passed = 0, index = 0;
    for (auto& r : reports) {
      char prefix[8];
      std::snprintf(prefix, sizeof prefix, "%02zu_", ++index);
      write_report_artifacts(run, r, std::string(prefix) + r.name);
      out.push_back(r.to_json());
      passed += r.pass;
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " [" << r.status << "] constant "
                << format_double(r.measured_constant) << '\n';
    }
    write_json(run.file("report.json"), out);
    std::cout << passed << "/" << reports.size() << " checks passed\n";
    return {{"checks", reports.size()}, {"passed", passed}};
  }
};

struct ProbeCmd {
  std::string kind = "counterexample";
  GridOptions grid{1, 1024, 8.0};
  std::vector<double> cutoffs{2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> alphas{1.0, 2.0, 4.0};
  std::vector<double> amplitudes{0.5, 1.0, 2.0};
  FieldSource field;
  double eps = 0.1;
  std::vector<double> x0;

  json run(Run& run) const {
    CheckReport r;
    if (kind == "counterexample") {
      ProbeGrid pg;
      pg.samples = grid.n;
      pg.extent = grid.L;
      pg.cutoffs = cutoffs;
      r = counterexample_probe(pg);
    } else if (kind == "analyticity") {
      r = analyticity_probe(grid.grid(), alphas, amplitudes);
    } else if (kind == "localization") {
      Point p{0.0, 0.0, 0.0};
      for (std::size_t d = 0; d < std::min<std::size_t>(3, x0.size()); ++d) p[d] = x0[d];
      r = localization_probe(field.load(grid.grid()), p, eps);
    } else {
      throw std::invalid_argument("unknown probe kind: " + kind);
    }
    write_report_artifacts(run, r, "probe_" + kind);
    json rec = r.to_json();
    write_json(run.file("probe.json"), rec);
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " [" << r.status << "]\n";
    return rec;
  }
};

// Splices the keys of a JSON config object in as flags right after the
// subcommand name, so explicit flags (parsed later) take precedence.
std::vector<std::string> apply_config(std::vector<std::string> args, const std::vector<std::string>& subcommands) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("cannot read config " + config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (pos == args.end()) return args;
  std::vector<std::string> extra;
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw std::invalid_argument("unsupported config value " + v.dump());
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& v : value) extra.insert(extra.end(), {"--" + key, scalar(v)});
    } else {
      extra.insert(extra.end(), {"--" + key, scalar(value)});
    }
  }
  args.insert(pos + 1, extra.begin(), extra.end());
  return args;
}

json echo_options(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      auto res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modulation-space norms, propagators, local solver and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", MODSPACE_VERSION);

  unsigned threads = 0;
  std::string out_dir = "modspace-out";
  std::string config;
  app.add_option("--threads", threads, "Cap on worker threads (0: all cores)");
  app.add_option("--out", out_dir, "Output directory")->envname("MODSPACE_OUT")->capture_default_str();
  app.add_option("--config", config, "JSON object of option values for the subcommand");

  NormCmd norm_cmd;
  auto* norm = app.add_subcommand("norm", "Modulation-space norm of a field");
  add_grid(norm, norm_cmd.grid);
  add_field(norm, norm_cmd.field);
  add_norm(norm, norm_cmd.norm);
  norm->add_option("--window", norm_cmd.window, "Catalog window (default: canonical Gaussian)");
  norm->add_option("--window-param", norm_cmd.window_params, "Window parameter key=value (repeatable)");

  StftCmd stft_cmd;
  auto* stft_sub = app.add_subcommand("stft", "STFT magnitude as CSV and SVG spectrogram");
  add_grid(stft_sub, stft_cmd.grid);
  add_field(stft_sub, stft_cmd.field);
  stft_sub->add_option("--cells", stft_cmd.cells, "Spectrogram cells per axis")->capture_default_str();

  PropagateCmd prop_cmd;
  auto* prop = app.add_subcommand("propagate", "Apply a linear propagator, or tabulate its norm ratio");
  add_grid(prop, prop_cmd.grid);
  add_field(prop, prop_cmd.field);
  add_norm(prop, prop_cmd.norm);
  prop->add_option("--kind", prop_cmd.kind, "schrodinger, wave_sine, wave_cosine, kg_sine or kg_cosine")
      ->capture_default_str();
  prop->add_option("--t", prop_cmd.t, "Time")->capture_default_str();
  prop->add_option("--times", prop_cmd.times, "Times for the battery norm-ratio table")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  prop->add_option("--seed", prop_cmd.seed, "Battery seed")->capture_default_str();
  prop->add_option("--battery-size", prop_cmd.battery_size, "Battery size")->capture_default_str();

  SolveCmd solve_cmd;
  auto* solve = app.add_subcommand("solve", "Local solution of NLS, NLW or NLKG by Picard iteration");
  add_grid(solve, solve_cmd.grid);
  add_norm(solve, solve_cmd.norm);
  solve->add_option("--eq", solve_cmd.eq, "nls, nlw or nlkg")->capture_default_str();
  solve->add_option("--nonlinearity", solve_cmd.nonlinearity, "Series preset or JSON file")->capture_default_str();
  solve->add_option("--u0", solve_cmd.u0, "Catalog function for the initial state")->capture_default_str();
  solve->add_option("--u0-param", solve_cmd.u0_params, "u0 parameter key=value (repeatable)");
  solve->add_option("--u1", solve_cmd.u1, "Catalog function for the initial velocity (nlw, nlkg)");
  solve->add_option("--u1-param", solve_cmd.u1_params, "u1 parameter key=value (repeatable)");
  solve->add_option("--t-end", solve_cmd.t_end, "Final time (may be negative)")->capture_default_str();
  solve->add_option("--dt", solve_cmd.dt, "Quadrature step")->capture_default_str();
  solve->add_option("--tol", solve_cmd.tol, "Picard tolerance")->capture_default_str();
  solve->add_option("--max-iter", solve_cmd.max_iter, "Picard iteration cap")->capture_default_str();
  solve->add_option("--c1", solve_cmd.c1, "Propagator bound constant")->capture_default_str();
  solve->add_option("--safety", solve_cmd.safety, "Horizon safety factor")->capture_default_str();
  solve->add_option("--cap", solve_cmd.cap, "Largest window length")->capture_default_str();
  solve->add_flag("--snapshots", solve_cmd.snapshots, "Write the final state in the binary container");

  VerifyCmd verify_cmd;
  auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");
  add_grid(verify, verify_cmd.grid);
  verify->add_option("--suite", verify_cmd.suite, "all or one suite name")->capture_default_str();
  verify->add_option("--seed", verify_cmd.seed, "Battery seed")->capture_default_str();
  verify->add_option("--battery-size", verify_cmd.battery_size, "Battery size")->capture_default_str();

  ProbeCmd probe_cmd;
  auto* probe = app.add_subcommand("probe", "Exploratory probes: counterexample, analyticity, localization");
  add_grid(probe, probe_cmd.grid);
  add_field(probe, probe_cmd.field);
  probe->add_option("--kind", probe_cmd.kind, "counterexample, analyticity or localization")->capture_default_str();
  probe->add_option("--cutoffs", probe_cmd.cutoffs, "Frequency cutoffs")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  probe->add_option("--alphas", probe_cmd.alphas, "Exponents alpha")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  probe->add_option("--amplitudes", probe_cmd.amplitudes, "Amplitudes")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  probe->add_option("--eps", probe_cmd.eps, "Localization tolerance")->capture_default_str();
  probe->add_option("--x0", probe_cmd.x0, "Localization point")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  const std::vector<std::string> names{"norm", "stft", "propagate", "solve", "verify", "probe"};
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(args, names);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  set_max_threads(threads);
  CLI::App* sub = app.get_subcommands().front();
  Run run{out_dir};
  json manifest = {{"command", sub->get_name()},
                   {"argv", std::vector<std::string>(argv + 1, argv + argc)},
                   {"config", echo_options(sub)},
                   {"version", MODSPACE_VERSION},
                   {"out_dir", run.out.string()},
                   {"threads", threads}};
  if (sub == verify) manifest["seed"] = verify_cmd.seed;
  if (sub == prop && !prop_cmd.times.empty()) manifest["seed"] = prop_cmd.seed;

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    fs::create_directories(run.out);
    json result;
    if (sub == norm) result = norm_cmd.run(run);
    else if (sub == stft_sub) result = stft_cmd.run(run);
    else if (sub == prop) result = prop_cmd.run(run);
    else if (sub == solve) result = solve_cmd.run(run);
    else if (sub == verify) result = verify_cmd.run(run);
    else result = probe_cmd.run(run);
    manifest["status"] = "ok";
    manifest["result"] = result;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    manifest["status"] = "numerical-failure";
    manifest["failing_stage"] = e.stage();
    manifest["message"] = e.what();
    code = kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest["status"] = "usage-error";
    manifest["message"] = e.what();
    code = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest["status"] = "error";
    manifest["message"] = e.what();
    code = kUsage;
  }
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["outputs"] = run.outputs;
  try {
    write_json(run.out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "cannot write manifest: " << e.what() << '\n';
    if (code == kOk) code = kUsage;
  }
  return code;
}
