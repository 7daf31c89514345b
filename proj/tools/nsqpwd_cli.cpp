// SPDX-License-Identifier: MIT
//
// Command-line front end: distribution slices, chirp analysis, transform
// evaluation, and the structural verification suite.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nsqpwd/nsqpwd.hpp>

namespace {

using nsqpwd::cplx;
using nsqpwd::Grid2D;
using nsqpwd::Point2;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration.

struct AppConfig {
  std::optional<nsqpwd::ParamTuple> omega;
  std::optional<nsqpwd::SignalSpec> spec;
  std::string signal_file;
  std::optional<Grid2D> xgrid;
  std::optional<Grid2D> wgrid;
  std::vector<Point2> slices;
  nsqpwd::EvalMode mode = nsqpwd::EvalMode::clipped();
  bool mode_set = false;
  std::int64_t paper_samples = 512;
  std::map<std::string, double> tolerances;
  double suite_extent = 6.0;
  std::int64_t suite_samples = 48;
};

nsqpwd::Mat2 mat2_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2)
    nsqpwd::raise(nsqpwd::errc::parse_error, what + " must be a 2x2 array of numbers");
  nsqpwd::Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const json& v = j[r][c];
      if (!v.is_number())
        nsqpwd::raise(nsqpwd::errc::parse_error, what + " entries must be numbers");
      m.m[r][c] = v.get<double>();
    }
  return m;
}

nsqpwd::ParamTuple omega_from_json(const json& j) {
  for (const char* key : {"A", "B", "C", "D", "E"})
    if (!j.contains(key))
      nsqpwd::raise(nsqpwd::errc::parse_error,
                    std::string("omega is missing matrix ") + key);
  nsqpwd::ParamTuple o;
  o.A = mat2_from_json(j["A"], "omega.A");
  o.B = mat2_from_json(j["B"], "omega.B");
  o.C = mat2_from_json(j["C"], "omega.C");
  o.D = mat2_from_json(j["D"], "omega.D");
  o.E = mat2_from_json(j["E"], "omega.E");
  nsqpwd::validate(o);
  return o;
}

Grid2D grid_from_json(const json& j, const std::string& what) {
  for (const char* key : {"lo", "hi", "n"})
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
      nsqpwd::raise(nsqpwd::errc::parse_error,
                    what + " needs two-element arrays lo, hi, n");
  double lo1 = j["lo"][0].get<double>(), lo2 = j["lo"][1].get<double>();
  double hi1 = j["hi"][0].get<double>(), hi2 = j["hi"][1].get<double>();
  std::int64_t n1 = j["n"][0].get<std::int64_t>(), n2 = j["n"][1].get<std::int64_t>();
  if (!(hi1 > lo1) || !(hi2 > lo2) || n1 < 1 || n2 < 1)
    nsqpwd::raise(nsqpwd::errc::parse_error, what + " must have hi > lo and n >= 1");
  return nsqpwd::grid_from_interval(lo1, hi1, n1, lo2, hi2, n2);
}

cplx kappa_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  nsqpwd::raise(nsqpwd::errc::parse_error,
                "kappa must be a number or a [re, im] pair");
}

nsqpwd::SignalSpec spec_from_json(const json& j) {
  nsqpwd::SignalSpec spec;
  if (!j.contains("T") || !j["T"].is_number())
    nsqpwd::raise(nsqpwd::errc::parse_error, "signal.T (support side length) is required");
  spec.T = j["T"].get<double>();
  if (!j.contains("components") || !j["components"].is_array() || j["components"].empty())
    nsqpwd::raise(nsqpwd::errc::parse_error, "signal.components must be a non-empty array");
  for (const json& c : j["components"]) {
    nsqpwd::LfmComponent comp;
    if (!c.contains("kappa"))
      nsqpwd::raise(nsqpwd::errc::parse_error, "component is missing kappa");
    comp.kappa = kappa_from_json(c["kappa"]);
    for (const char* key : {"alpha", "beta", "mu", "lambda"})
      if (!c.contains(key) || !c[key].is_number())
        nsqpwd::raise(nsqpwd::errc::parse_error,
                      std::string("component is missing number ") + key);
    comp.alpha = c["alpha"].get<double>();
    comp.beta = c["beta"].get<double>();
    comp.mu = c["mu"].get<double>();
    comp.lambda = c["lambda"].get<double>();
    spec.components.push_back(comp);
  }
  return spec;
}

AppConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) nsqpwd::raise(nsqpwd::errc::io_error, "cannot open config: " + path);
  json j;
  try {
    j = json::parse(is, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    nsqpwd::raise(nsqpwd::errc::parse_error, std::string("config JSON: ") + e.what());
  }
  AppConfig cfg;
  if (j.contains("omega")) cfg.omega = omega_from_json(j["omega"]);
  if (j.contains("signal")) {
    const json& s = j["signal"];
    if (s.contains("file")) {
      cfg.signal_file = s["file"].get<std::string>();
    } else {
      cfg.spec = spec_from_json(s);
    }
  }
  if (j.contains("grid")) cfg.xgrid = grid_from_json(j["grid"], "grid");
  if (j.contains("omega_grid")) cfg.wgrid = grid_from_json(j["omega_grid"], "omega_grid");
  if (j.contains("slices")) {
    for (const json& s : j["slices"]) {
      if (!s.is_array() || s.size() != 2)
        nsqpwd::raise(nsqpwd::errc::parse_error, "each slice must be [x1, x2]");
      cfg.slices.push_back({s[0].get<double>(), s[1].get<double>()});
    }
  }
  if (j.contains("paper_range")) {
    const json& p = j["paper_range"];
    if (p.contains("samples")) cfg.paper_samples = p["samples"].get<std::int64_t>();
  }
  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "paper") {
      if (!cfg.spec)
        nsqpwd::raise(nsqpwd::errc::parse_error,
                      "mode \"paper\" needs a closed-form signal (signal.components)");
      cfg.mode = nsqpwd::EvalMode::fixed(cfg.spec->T, cfg.paper_samples);
      cfg.mode_set = true;
    } else if (m == "clipped") {
      cfg.mode = nsqpwd::EvalMode::clipped();
      cfg.mode_set = true;
    } else {
      nsqpwd::raise(nsqpwd::errc::parse_error, "mode must be \"paper\" or \"clipped\"");
    }
  }
  if (j.contains("tolerances")) {
    for (auto& [key, val] : j["tolerances"].items())
      cfg.tolerances[key] = val.get<double>();
  }
  if (j.contains("suite")) {
    const json& s = j["suite"];
    if (s.contains("extent")) cfg.suite_extent = s["extent"].get<double>();
    if (s.contains("samples")) cfg.suite_samples = s["samples"].get<std::int64_t>();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Shared command state.

struct CliOptions {
  std::string config_path;
  std::string out_stem;
  std::string mode_flag;  // "", "paper", "clipped"
  std::string format = "csv";
  std::uint64_t seed = 12345;
  double snr_db = std::numeric_limits<double>::infinity();
  bool snr_set = false;
  std::vector<std::string> slice_args;
};

Point2 parse_slice_arg(const std::string& s) {
  double a = 0.0, b = 0.0;
  if (std::sscanf(s.c_str(), "%lf,%lf", &a, &b) != 2)
    nsqpwd::raise(nsqpwd::errc::parse_error, "--slice expects x1,x2 (got " + s + ")");
  return {a, b};
}

/// Applies command-line overrides on top of the config file.
void merge_cli(AppConfig& cfg, const CliOptions& opt) {
  if (!opt.slice_args.empty()) cfg.slices.clear();
  for (const std::string& s : opt.slice_args) cfg.slices.push_back(parse_slice_arg(s));
  if (!opt.mode_flag.empty()) {
    if (opt.mode_flag == "paper") {
      if (!cfg.spec)
        nsqpwd::raise(nsqpwd::errc::parse_error,
                      "--mode paper needs a closed-form signal (signal.components)");
      cfg.mode = nsqpwd::EvalMode::fixed(cfg.spec->T, cfg.paper_samples);
    } else {
      cfg.mode = nsqpwd::EvalMode::clipped();
    }
    cfg.mode_set = true;
  }
}

nsqpwd::ComplexField build_signal(const AppConfig& cfg, const CliOptions& opt) {
  nsqpwd::ComplexField f;
  if (!cfg.signal_file.empty()) {
    f = nsqpwd::read_field_bin(cfg.signal_file);
  } else if (cfg.spec) {
    if (!cfg.xgrid)
      nsqpwd::raise(nsqpwd::errc::parse_error,
                    "synthesizing a signal needs a \"grid\" block");
    f = nsqpwd::synthesize(*cfg.spec, *cfg.xgrid);
  } else {
    nsqpwd::raise(nsqpwd::errc::parse_error, "config has no \"signal\" block");
  }
  if (opt.snr_set && std::isfinite(opt.snr_db))
    f = nsqpwd::add_awgn(f, opt.snr_db, opt.seed);
  return f;
}

void require(bool ok, const char* msg) {
  if (!ok) nsqpwd::raise(nsqpwd::errc::parse_error, msg);
}

void write_layer(const std::string& stem, const std::string& format, const Grid2D& grid,
                 const std::vector<cplx>& values) {
  if (format == "csv" || format == "both") {
    nsqpwd::write_slice_csv(stem + ".csv", grid, values);
    std::cout << "  wrote " << stem << ".csv\n";
  }
  if (format == "bin" || format == "both") {
    nsqpwd::write_grid_values_bin(stem + ".nsqw", grid, values);
    std::cout << "  wrote " << stem << ".nsqw\n";
  }
  if (format == "both") {
    nsqpwd::write_gnuplot_matrix(stem + ".gp.dat", grid, values);
    std::cout << "  wrote " << stem << ".gp.dat\n";
  }
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_wd(const AppConfig& cfg, const CliOptions& opt, bool& running) {
  require(cfg.omega.has_value(), "wd needs an \"omega\" block");
  require(cfg.wgrid.has_value(), "wd needs an \"omega_grid\" block");
  require(!cfg.slices.empty(), "wd needs at least one slice (config or --slice)");
  nsqpwd::ComplexField f = build_signal(cfg, opt);
  running = true;
  std::string stem = opt.out_stem.empty() ? "wd_out" : opt.out_stem;
  for (std::size_t k = 0; k < cfg.slices.size(); ++k) {
    Point2 x = cfg.slices[k];
    nsqpwd::WignerSlice s = nsqpwd::wd_slice(f, *cfg.omega, x, *cfg.wgrid, cfg.mode);
    auto peaks = nsqpwd::detect_peaks(s, 1);
    std::cout << "slice " << k << " at (" << x.x1 << ", " << x.x2 << "): peak |W| = "
              << peaks[0].magnitude << " at omega = (" << peaks[0].w.x1 << ", "
              << peaks[0].w.x2 << ")\n";
    write_layer(stem + "_s" + std::to_string(k), opt.format, s.wgrid, s.values);
  }
  return 0;
}

int cmd_qpft(const AppConfig& cfg, const CliOptions& opt, bool& running) {
  require(cfg.omega.has_value(), "qpft needs an \"omega\" block");
  require(cfg.wgrid.has_value(), "qpft needs an \"omega_grid\" block");
  nsqpwd::ComplexField f = build_signal(cfg, opt);
  running = true;
  nsqpwd::ComplexField F = nsqpwd::forward(f, *cfg.omega, *cfg.wgrid);
  double e = nsqpwd::field_energy(F);
  double peak = 0.0;
  Point2 at{0.0, 0.0};
  for (std::int64_t i = 0; i < F.grid.n1; ++i)
    for (std::int64_t j = 0; j < F.grid.n2; ++j) {
      double v = std::abs(F.at(i, j));
      if (v > peak) {
        peak = v;
        at = F.grid.node(i, j);
      }
    }
  std::cout << "transform energy on the window: " << e << "\n";
  std::cout << "peak |F| = " << peak << " at omega = (" << at.x1 << ", " << at.x2 << ")\n";
  std::string stem = opt.out_stem.empty() ? "qpft_out" : opt.out_stem;
  write_layer(stem, opt.format, F.grid, F.values);
  return 0;
}

int cmd_lfm(const AppConfig& cfg, const CliOptions& opt, bool& running) {
  require(cfg.omega.has_value(), "lfm needs an \"omega\" block");
  require(cfg.wgrid.has_value(), "lfm needs an \"omega_grid\" block");
  require(cfg.spec.has_value(), "lfm analysis needs signal.components");
  require(!cfg.slices.empty(), "lfm needs at least one slice (config or --slice)");
  nsqpwd::ComplexField f = build_signal(cfg, opt);
  running = true;
  const nsqpwd::SignalSpec& spec = *cfg.spec;
  std::string stem = opt.out_stem;
  for (std::size_t k = 0; k < cfg.slices.size(); ++k) {
    Point2 x = cfg.slices[k];
    nsqpwd::WignerSlice s = nsqpwd::wd_slice(f, *cfg.omega, x, *cfg.wgrid, cfg.mode);
    auto peaks = nsqpwd::detect_peaks(s, spec.components.size());
    std::cout << "slice (" << x.x1 << ", " << x.x2 << "):\n";
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      const nsqpwd::Peak& pk = peaks[p];
      std::cout << "  peak " << (p + 1) << ": omega = (" << pk.w.x1 << ", " << pk.w.x2
                << "), |W| = " << pk.magnitude << "\n";
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_c = 0;
      Point2 best_w{0.0, 0.0};
      for (std::size_t c = 0; c < spec.components.size(); ++c) {
        Point2 pw = nsqpwd::predicted_peak(spec.components[c], *cfg.omega, x);
        double d = std::hypot(pw.x1 - pk.w.x1, pw.x2 - pk.w.x2);
        if (d < best) {
          best = d;
          best_c = c;
          best_w = pw;
        }
      }
      double cells = std::max(std::abs(best_w.x1 - pk.w.x1) / s.wgrid.step1,
                              std::abs(best_w.x2 - pk.w.x2) / s.wgrid.step2);
      double pred = nsqpwd::predict_mono(spec.components[best_c], *cfg.omega, spec.T,
                                         x, best_w);
      std::cout << "    nearest prediction: component " << (best_c + 1) << " at ("
                << best_w.x1 << ", " << best_w.x2 << "), distance " << best << " ("
                << cells << " cells), predicted auto |W| = " << std::abs(pred) << "\n";
    }
    if (!stem.empty())
      write_layer(stem + "_s" + std::to_string(k), opt.format, s.wgrid, s.values);
  }
  return 0;
}

/// Reference tuple used when verify runs without a config: a generic
/// non-separable instance with symmetric B of determinant 7.
nsqpwd::ParamTuple reference_tuple() {
  nsqpwd::ParamTuple o;
  o.A = {{{1.0, -5.0}, {5.0, 1.0}}};
  o.B = {{{2.0, 1.0}, {1.0, 4.0}}};
  o.C = {{{1.0, -13.0 / 7.0}, {13.0 / 7.0, 1.0}}};
  o.D = {{{2.0, 1.0}, {2.0, 5.0}}};
  o.E = {{{1.0, 2.0}, {3.0, 4.0}}};
  return o;
}

int cmd_verify(const AppConfig& cfg) {
  nsqpwd::ParamTuple omega = cfg.omega ? *cfg.omega : reference_tuple();
  nsqpwd::SuiteOptions opts;
  opts.extent = cfg.suite_extent;
  opts.samples = cfg.suite_samples;
  opts.tolerances = cfg.tolerances;
  std::vector<nsqpwd::CheckReport> reports = nsqpwd::run_default_suite(omega, opts);
  bool all = true;
  for (const nsqpwd::CheckReport& r : reports) {
    all = all && r.pass;
    std::printf("%-14s %s  rel_err %.3e  tol %.1e  (%s)\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.rel_err, r.tol, r.note.c_str());
  }
  std::printf("%zu checks, %s\n", reports.size(), all ? "all passed" : "FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-separable quadratic-phase distribution toolkit"};
  app.require_subcommand(1);

  CliOptions opt;
  auto add_common = [&opt](CLI::App* sub, bool config_required) {
    CLI::Option* c = sub->add_option("--config", opt.config_path, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--out", opt.out_stem, "output file stem");
    sub->add_option("--mode", opt.mode_flag, "lag evaluation mode")
        ->check(CLI::IsMember({"paper", "clipped"}));
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "bin", "both"}));
    sub->add_option("--seed", opt.seed, "noise generator seed");
    sub->add_option("--snr-db", opt.snr_db, "add white Gaussian noise at this SNR")
        ->check(CLI::Number);
    sub->add_option("--slice", opt.slice_args, "time point x1,x2 (repeatable)");
  };

  CLI::App* wd = app.add_subcommand("wd", "evaluate distribution slices");
  add_common(wd, true);
  CLI::App* lfm = app.add_subcommand("lfm", "detect chirp peaks and compare predictions");
  add_common(lfm, true);
  CLI::App* qpft = app.add_subcommand("qpft", "evaluate the forward transform");
  add_common(qpft, true);
  CLI::App* verify = app.add_subcommand("verify", "run the structural check suite");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.snr_set = std::isfinite(opt.snr_db);

  // `running` flips once a command has validated and loaded its inputs;
  // failures before that point are configuration errors.
  bool running = false;
  try {
    AppConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    merge_cli(cfg, opt);
    if (app.got_subcommand(verify)) {
      running = true;
      return cmd_verify(cfg);
    }
    if (app.got_subcommand(wd)) return cmd_wd(cfg, opt, running);
    if (app.got_subcommand(lfm)) return cmd_lfm(cfg, opt, running);
    return cmd_qpft(cfg, opt, running);
  } catch (const nsqpwd::error& e) {
    std::cerr << nsqpwd::errc_name(e.kind()) << ": " << e.what() << "\n";
    if (e.kind() == nsqpwd::errc::io_error) return 4;
    return running ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return running ? 3 : 2;
  }
}
