#include "sightline/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sightline::harness {

using nlohmann::json;

const char* const kCsvHeader =
    "model,d,alpha,rho_spec,r,n,f_analytic,f_hat,f_se,pvis_hat,pvis_se,undecided_frac,"
    "delta_r,ratio,ratio_lo,ratio_hi,seed,wall_ms";

void RunConfig::validate() const {
  params();  // throws on inconsistent model parameters
  if (r_values.empty()) throw std::invalid_argument("config: no r values");
  for (size_t i = 0; i + 1 < r_values.size(); ++i)
    if (!(r_values[i] < r_values[i + 1]))
      throw std::invalid_argument("config: r values must be sorted ascending");
  double min_r = analytic::scaling_profile(model, dim).min_r();
  for (double r : r_values)
    if (!(r >= min_r)) throw std::invalid_argument("config: r below profile range");
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
  if (!(band > 1)) throw std::invalid_argument("config: band must exceed 1");
  if (resolution < 0 || step < 0 || threads < 0)
    throw std::invalid_argument("config: negative parameter");
}

models::WindowSpec window_for(const ModelParams& params, double r) {
  double margin =
      params.model == ModelKind::kBoolean ? params.rho_max() : params.rho();
  return models::WindowSpec{r + margin, margin};
}

double default_resolution(const ModelParams& params, double r) {
  return analytic::scaling_profile(params.model, params.dim).delta(r) / 4;
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  SweepResult result;
  result.cfg = cfg;
  ModelParams params = cfg.params();
  models::SimOptions opts;
  opts.threads = cfg.threads;
  opts.disc.step = cfg.step;

  for (size_t k = 0; k < cfg.r_values.size(); ++k) {
    double r = cfg.r_values[k];
    SweepRow row;
    row.r = r;
    row.n = cfg.samples;
    auto t0 = std::chrono::steady_clock::now();
    try {
      models::WindowSpec window = window_for(params, r);
      double resolution = cfg.resolution > 0 ? cfg.resolution : default_resolution(params, r);
      // Distinct tasks per (r, estimator); stream ids never collide across rows.
      std::uint64_t seed_f = stream_id(cfg.seed, 2 * k, 0);
      std::uint64_t seed_p = stream_id(cfg.seed, 2 * k + 1, 0);
      row.f_analytic = analytic::analytic_f(params, r);
      row.f = visibility::estimate_f(params, window, r, cfg.samples, seed_f, opts);
      row.pvis =
          visibility::estimate_pvis(params, window, r, cfg.samples, seed_p, resolution, opts);
      row.delta_r = analytic::scaling_profile(params.model, params.dim).delta(r);
      if (row.f.p_hat > 0) {
        row.ratio =
            analytic::ratio_statistic(row.pvis.visible.p_hat, row.f.p_hat, r, row.delta_r,
                                      params.dim);
        row.ratio_lo =
            analytic::ratio_statistic(row.pvis.p_lo, row.f.p_hat, r, row.delta_r, params.dim);
        row.ratio_hi =
            analytic::ratio_statistic(row.pvis.p_hi, row.f.p_hat, r, row.delta_r, params.dim);
      } else {
        row.failed = true;
        row.error = "f estimate is zero";
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    if (cfg.timing)
      row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    result.rows.push_back(std::move(row));
  }
  return result;
}

VerifyReport verify_bounds(const SweepResult& result, double band) {
  VerifyReport report;
  report.band_required = band;
  double lo = 0, hi = 0;
  int used = 0;
  std::ostringstream detail;
  for (const auto& row : result.rows) {
    if (row.failed) continue;
    if (!(row.ratio > 0) || !std::isfinite(row.ratio)) continue;
    double f_rel = row.f.p_hat > 0 ? row.f.se / row.f.p_hat : 1.0;
    double p_rel =
        row.pvis.visible.p_hat > 0 ? row.pvis.visible.se / row.pvis.visible.p_hat : 1.0;
    if (f_rel >= 0.2 || p_rel >= 0.2) continue;
    if (used == 0) {
      lo = row.ratio_lo;
      hi = row.ratio_hi;
    } else {
      lo = std::min(lo, row.ratio_lo);
      hi = std::max(hi, row.ratio_hi);
    }
    ++used;
  }
  report.rows_used = used;
  if (used < 3) {
    report.insufficient = true;
    detail << "only " << used << " rows with relative SE < 20%";
    report.detail = detail.str();
    return report;
  }
  if (!(lo > 0)) {
    report.detail = "nonpositive ratio in sweep";
    return report;
  }
  report.band_achieved = hi / lo;
  report.pass = report.band_achieved <= band;
  detail << "ratio band " << report.band_achieved << " over " << used << " rows (required <= "
         << band << ")";
  report.detail = detail.str();
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}
}  // namespace

std::string to_csv(const SweepResult& result) {
  const RunConfig& cfg = result.cfg;
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& row : result.rows) {
    os << analytic::model_name(cfg.model) << ',' << cfg.dim << ',' << fmt(cfg.alpha) << ','
       << cfg.radius.spec_string() << ',' << fmt(row.r) << ',' << row.n << ',';
    os << (row.f_analytic ? fmt(*row.f_analytic) : "nan") << ',';
    os << fmt(row.f.p_hat) << ',' << fmt(row.f.se) << ',' << fmt(row.pvis.visible.p_hat) << ','
       << fmt(row.pvis.visible.se) << ','
       << fmt(row.n > 0 ? double(row.pvis.undecided) / double(row.n) : 0.0) << ','
       << fmt(row.delta_r) << ',' << fmt(row.ratio) << ',' << fmt(row.ratio_lo) << ','
       << fmt(row.ratio_hi) << ',' << cfg.seed << ',' << row.wall_ms << "\n";
  }
  return os.str();
}

std::string to_json_string(const SweepResult& result) {
  const RunConfig& cfg = result.cfg;
  json j;
  j["config"] = {{"model", analytic::model_name(cfg.model)},
                 {"dim", cfg.dim},
                 {"alpha", cfg.alpha},
                 {"rho_spec", cfg.radius.spec_string()},
                 {"samples", cfg.samples},
                 {"seed", cfg.seed},
                 {"band", cfg.band}};
  j["rows"] = json::array();
  for (const auto& row : result.rows) {
    json r;
    r["r"] = row.r;
    r["n"] = row.n;
    if (row.f_analytic) r["f_analytic"] = *row.f_analytic;
    r["f_hat"] = row.f.p_hat;
    r["f_se"] = row.f.se;
    r["pvis_hat"] = row.pvis.visible.p_hat;
    r["pvis_se"] = row.pvis.visible.se;
    r["undecided_frac"] = row.n > 0 ? double(row.pvis.undecided) / double(row.n) : 0.0;
    r["delta_r"] = row.delta_r;
    r["ratio"] = row.ratio;
    r["ratio_lo"] = row.ratio_lo;
    r["ratio_hi"] = row.ratio_hi;
    r["wall_ms"] = row.wall_ms;
    if (row.failed) r["error"] = row.error;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

namespace {

RadiusLaw radius_law_from_json(const json& j) {
  if (j.is_number()) return RadiusLaw::constant(j.get<double>());
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return RadiusLaw::constant(j.at("rho").get<double>());
  if (kind == "discrete") {
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return RadiusLaw::discrete(std::move(atoms));
  }
  if (kind == "quantile_table") {
    auto u = j.at("u").get<std::vector<double>>();
    auto q = j.at("q").get<std::vector<double>>();
    double tail = j.value("tail_mass", 0.0);
    return RadiusLaw::quantile_table(std::move(u), std::move(q), tail);
  }
  throw std::invalid_argument("radius law: unknown kind " + kind);
}

}  // namespace

RadiusLaw radius_law_from_json_text(const std::string& text) {
  return radius_law_from_json(json::parse(text));
}

RunConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  RunConfig cfg;
  if (j.contains("model")) cfg.model = analytic::model_from_name(j["model"].get<std::string>());
  if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("rho")) cfg.radius = RadiusLaw::constant(j["rho"].get<double>());
  if (j.contains("radius_law")) cfg.radius = radius_law_from_json(j["radius_law"]);
  if (j.contains("r")) cfg.r_values = j["r"].get<std::vector<double>>();
  if (j.contains("samples")) cfg.samples = j["samples"].get<std::int64_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("resolution")) cfg.resolution = j["resolution"].get<double>();
  if (j.contains("step")) cfg.step = j["step"].get<double>();
  if (j.contains("band")) cfg.band = j["band"].get<double>();
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("timing")) cfg.timing = j["timing"].get<bool>();
  if (j.contains("format")) {
    std::string f = j["format"].get<std::string>();
    if (f == "csv")
      cfg.format = RunConfig::Format::kCsv;
    else if (f == "json")
      cfg.format = RunConfig::Format::kJson;
    else
      throw std::invalid_argument("config: unknown format " + f);
  }
  return cfg;
}

SweepResult sweep_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
  if (line != kCsvHeader) throw std::invalid_argument("unrecognized CSV header");
  SweepResult result;
  bool have_cfg = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 18) throw std::invalid_argument("bad CSV row");
    if (!have_cfg) {
      result.cfg.model = analytic::model_from_name(cells[0]);
      result.cfg.dim = std::stoi(cells[1]);
      result.cfg.alpha = std::stod(cells[2]);
      result.cfg.seed = std::stoull(cells[16]);
      have_cfg = true;
    }
    SweepRow row;
    row.r = std::stod(cells[4]);
    row.n = std::stoll(cells[5]);
    if (cells[6] != "nan") row.f_analytic = std::stod(cells[6]);
    row.f.p_hat = std::stod(cells[7]);
    row.f.se = std::stod(cells[8]);
    row.f.n = row.n;
    row.pvis.visible.p_hat = std::stod(cells[9]);
    row.pvis.visible.se = std::stod(cells[10]);
    row.pvis.visible.n = row.n;
    row.pvis.undecided = std::llround(std::stod(cells[11]) * double(row.n));
    row.delta_r = std::stod(cells[12]);
    row.ratio = std::stod(cells[13]);
    row.ratio_lo = std::stod(cells[14]);
    row.ratio_hi = std::stod(cells[15]);
    row.wall_ms = std::stoll(cells[17]);
    result.cfg.r_values.push_back(row.r);
    result.cfg.samples = row.n;
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace sightline::harness
