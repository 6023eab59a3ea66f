// Command-line front end: closed forms, capacity estimation, visibility
// estimates, parameter sweeps and bound verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sightline/brownian.hpp"
#include "sightline/harness.hpp"

namespace {

using namespace sightline;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerifyFail = 2;
constexpr int kExitImprecise = 3;

struct CommonFlags {
  std::string config_path;
  std::string model = "boolean";
  int dim = 2;
  double alpha = 0.1;
  double rho = 1.0;
  std::string radius_law_path;
  std::vector<double> r_values;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
  double resolution = 0;
  double step = 0;
  double band = 3.0;
  std::string out_path;
  std::string format = "csv";
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override)");
  cmd->add_option("--model", f.model, "boolean|cylinders|interlacements");
  cmd->add_option("--dim", f.dim, "ambient dimension");
  cmd->add_option("--alpha", f.alpha, "obstacle intensity");
  cmd->add_option("--rho", f.rho, "constant obstacle radius");
  cmd->add_option("--radius-law", f.radius_law_path, "JSON radius law file (boolean model)");
  cmd->add_option("--r", f.r_values, "visibility distances");
  cmd->add_option("--samples", f.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
  cmd->add_option("--resolution", f.resolution, "direction grid resolution (0 = auto)");
  cmd->add_option("--step", f.step, "trajectory Euler step (0 = auto)");
  cmd->add_option("--out", f.out_path, "output path (default stdout)");
  cmd->add_option("--format", f.format, "csv|json");
  cmd->add_flag("--timing", f.timing, "record measured wall_ms (breaks byte reproducibility)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

harness::RunConfig build_config(const CLI::App* cmd, const CommonFlags& f) {
  harness::RunConfig cfg;
  if (!f.config_path.empty()) cfg = harness::config_from_json_text(read_file(f.config_path));
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--model")) cfg.model = analytic::model_from_name(f.model);
  if (given("--dim")) cfg.dim = f.dim;
  if (given("--alpha")) cfg.alpha = f.alpha;
  if (given("--rho")) cfg.radius = analytic::RadiusLaw::constant(f.rho);
  if (given("--radius-law"))
    cfg.radius = harness::radius_law_from_json_text(read_file(f.radius_law_path));
  if (given("--r")) cfg.r_values = f.r_values;
  if (given("--samples")) cfg.samples = f.samples;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--resolution")) cfg.resolution = f.resolution;
  if (given("--step")) cfg.step = f.step;
  if (cmd->count("--band")) cfg.band = f.band;
  if (given("--out")) cfg.out_path = f.out_path;
  if (given("--timing")) cfg.timing = f.timing;
  if (given("--format")) {
    if (f.format == "csv")
      cfg.format = harness::RunConfig::Format::kCsv;
    else if (f.format == "json")
      cfg.format = harness::RunConfig::Format::kJson;
    else
      throw std::invalid_argument("unknown format " + f.format);
  }
  return cfg;
}

void write_output(const harness::RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
  out << text;
}

int cmd_analytic(const harness::RunConfig& cfg) {
  cfg.validate();
  analytic::ModelParams params = cfg.params();
  auto profile = analytic::scaling_profile(cfg.model, cfg.dim);
  std::printf("model=%s d=%d alpha=%g radius=%s\n", analytic::model_name(cfg.model).c_str(),
              cfg.dim, cfg.alpha, cfg.radius.spec_string().c_str());
  if (cfg.dim >= 3)
    std::printf("ball_capacity(rho)=%.12g\n", analytic::ball_capacity(cfg.dim, params.rho_max()));
  std::printf("mean_projected_sine=%.12g\n", analytic::mean_projected_sine(cfg.dim));
  std::printf("%10s %14s %14s %14s %14s %14s\n", "r", "delta", "phi", "psi", "mu", "f");
  for (double r : cfg.r_values) {
    double mu = 0;
    std::string f_str = "n/a";
    if (cfg.model == analytic::ModelKind::kBoolean) {
      mu = analytic::boolean_mu_segment(cfg.dim, cfg.radius, r);
      f_str = std::to_string(analytic::boolean_f(params, r));
    } else if (cfg.model == analytic::ModelKind::kCylinders) {
      mu = analytic::cylinder_mu_capsule(cfg.dim, params.rho(), r);
      f_str = std::to_string(analytic::cylinder_f(params, r));
    }
    std::printf("%10g %14.8g %14.8g %14.8g %14.8g %14s\n", r, profile.delta(r), profile.phi(r),
                profile.psi(r), mu, f_str.c_str());
  }
  return kExitOk;
}

int cmd_capacity(const harness::RunConfig& cfg, const std::string& shape_kind, double length,
                 double start_radius) {
  analytic::ModelParams params(analytic::ModelKind::kInterlacements, cfg.dim < 3 ? 3 : cfg.dim,
                               cfg.alpha, cfg.radius);
  const int d = params.dim;
  const double rho = params.rho_max();
  brownian::Shape shape = brownian::Shape::ball(geom::Ball(Vec(d), rho));
  if (shape_kind == "capsule") {
    Vec a = Vec::axis(d, 0, -length / 2);
    Vec b = Vec::axis(d, 0, length / 2);
    shape = brownian::Shape::capsule(geom::Capsule(geom::Segment(a, b), rho));
  } else if (shape_kind != "ball") {
    throw std::invalid_argument("capacity: --shape must be ball or capsule");
  }
  double R = start_radius > 0 ? start_radius : 1.25 * shape.bound_radius();
  auto est = brownian::capacity_mc(shape, d, R, cfg.samples, cfg.seed, cfg.threads);
  std::printf("shape=%s d=%d rho=%g length=%g R=%g\n", shape_kind.c_str(), d, rho,
              shape_kind == "capsule" ? length : 0.0, R);
  std::printf("capacity=%.8g se=%.4g n=%lld hits=%lld censored=%lld\n", est.value, est.se,
              (long long)est.n, (long long)est.hits, (long long)est.censored);
  if (d >= 3 && shape_kind == "ball")
    std::printf("closed_form=%.8g\n", analytic::ball_capacity(d, rho));
  return kExitOk;
}

int cmd_f(const harness::RunConfig& cfg) {
  cfg.validate();
  analytic::ModelParams params = cfg.params();
  models::SimOptions opts;
  opts.threads = cfg.threads;
  opts.disc.step = cfg.step;
  std::printf("%10s %14s %14s %12s %12s\n", "r", "f_hat", "f_se", "hits", "f_analytic");
  for (double r : cfg.r_values) {
    auto window = harness::window_for(params, r);
    auto est = visibility::estimate_f(params, window, r, cfg.samples, cfg.seed, opts);
    auto fa = analytic::analytic_f(params, r);
    std::printf("%10g %14.8g %14.4g %12lld %12s\n", r, est.p_hat, est.se, (long long)est.hits,
                fa ? std::to_string(*fa).c_str() : "n/a");
  }
  return kExitOk;
}

int cmd_pvis(const harness::RunConfig& cfg) {
  cfg.validate();
  analytic::ModelParams params = cfg.params();
  models::SimOptions opts;
  opts.threads = cfg.threads;
  opts.disc.step = cfg.step;
  std::printf("%10s %14s %14s %14s %14s\n", "r", "pvis_hat", "pvis_se", "undecided", "p_hi");
  for (double r : cfg.r_values) {
    auto window = harness::window_for(params, r);
    double res = cfg.resolution > 0 ? cfg.resolution : harness::default_resolution(params, r);
    auto est = visibility::estimate_pvis(params, window, r, cfg.samples, cfg.seed, res, opts);
    std::printf("%10g %14.8g %14.4g %14lld %14.8g\n", r, est.visible.p_hat, est.visible.se,
                (long long)est.undecided, est.p_hi);
  }
  return kExitOk;
}

int cmd_sweep(const harness::RunConfig& cfg) {
  auto result = harness::run_sweep(cfg);
  write_output(cfg, cfg.format == harness::RunConfig::Format::kJson
                        ? harness::to_json_string(result)
                        : harness::to_csv(result));
  return kExitOk;
}

int cmd_verify(const harness::RunConfig& cfg, const std::string& in_path) {
  harness::SweepResult result;
  if (!in_path.empty()) {
    result = harness::sweep_from_csv(read_file(in_path));
  } else {
    result = harness::run_sweep(cfg);
    if (!cfg.out_path.empty())
      write_output(cfg, cfg.format == harness::RunConfig::Format::kJson
                            ? harness::to_json_string(result)
                            : harness::to_csv(result));
  }
  auto report = harness::verify_bounds(result, cfg.band);
  std::printf("%s\n", report.detail.c_str());
  if (report.insufficient) {
    std::printf("RESULT: INSUFFICIENT PRECISION\n");
    return kExitImprecise;
  }
  std::printf("RESULT: %s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic-geometry visibility engine"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string shape_kind = "ball";
  double shape_length = 8;
  double start_radius = 0;
  std::string verify_in;

  CLI::App* analytic_cmd = app.add_subcommand("analytic", "print closed-form quantities");
  add_common(analytic_cmd, f);
  CLI::App* capacity_cmd = app.add_subcommand("capacity", "Monte Carlo capacity of a shape");
  add_common(capacity_cmd, f);
  capacity_cmd->add_option("--shape", shape_kind, "ball|capsule");
  capacity_cmd->add_option("--length", shape_length, "capsule length");
  capacity_cmd->add_option("--start-radius", start_radius, "launch sphere radius (0 = auto)");
  CLI::App* f_cmd = app.add_subcommand("f", "directional visibility estimate");
  add_common(f_cmd, f);
  CLI::App* pvis_cmd = app.add_subcommand("pvis", "omnidirectional visibility estimate");
  add_common(pvis_cmd, f);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "full sweep over r");
  add_common(sweep_cmd, f);
  CLI::App* verify_cmd = app.add_subcommand("verify", "sweep (or read CSV) and check the band");
  add_common(verify_cmd, f);
  verify_cmd->add_option("--in", verify_in, "existing sweep CSV to verify");
  for (CLI::App* c : {analytic_cmd, capacity_cmd, f_cmd, pvis_cmd, sweep_cmd, verify_cmd})
    c->add_option("--band", f.band, "allowed max/min ratio band");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analytic_cmd->parsed()) return cmd_analytic(build_config(analytic_cmd, f));
    if (capacity_cmd->parsed())
      return cmd_capacity(build_config(capacity_cmd, f), shape_kind, shape_length, start_radius);
    if (f_cmd->parsed()) return cmd_f(build_config(f_cmd, f));
    if (pvis_cmd->parsed()) return cmd_pvis(build_config(pvis_cmd, f));
    if (sweep_cmd->parsed()) return cmd_sweep(build_config(sweep_cmd, f));
    if (verify_cmd->parsed()) return cmd_verify(build_config(verify_cmd, f), verify_in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
