#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sightline/analytic.hpp"
#include "sightline/models.hpp"
#include "sightline/visibility.hpp"

namespace sightline::harness {

using analytic::ModelKind;
using analytic::ModelParams;
using analytic::RadiusLaw;

struct RunConfig {
  ModelKind model = ModelKind::kBoolean;
  int dim = 2;
  double alpha = 0.1;
  RadiusLaw radius = RadiusLaw::constant(1.0);
  std::vector<double> r_values;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  int threads = 0;        // 0 = hardware concurrency
  double resolution = 0;  // 0 = delta(r)/4
  double step = 0;        // interlacement Euler step; 0 = default
  double band = 3.0;      // verification band
  std::string out_path;   // empty = stdout
  enum class Format { kCsv, kJson };
  Format format = Format::kCsv;
  bool timing = false;    // measured wall_ms breaks byte reproducibility; opt-in

  ModelParams params() const { return ModelParams(model, dim, alpha, radius); }
  void validate() const;
};

struct SweepRow {
  double r = 0;
  std::int64_t n = 0;
  std::optional<double> f_analytic;
  ProbEstimate f;
  visibility::PvisEstimate pvis;
  double delta_r = 0;
  double ratio = 0;
  double ratio_lo = 0;
  double ratio_hi = 0;
  std::int64_t wall_ms = 0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  RunConfig cfg;
  std::vector<SweepRow> rows;
};

/// Window sized so every obstacle able to reach B(0, r) is sampled exactly.
models::WindowSpec window_for(const ModelParams& params, double r);

/// Default direction-grid resolution, a quarter of the visibility window.
double default_resolution(const ModelParams& params, double r);

SweepResult run_sweep(const RunConfig& cfg);

struct VerifyReport {
  bool pass = false;
  bool insufficient = false;  // too few rows with usable precision
  double band_required = 0;
  double band_achieved = 0;
  int rows_used = 0;
  std::string detail;
};

/// Checks that the ratio statistic stays within a multiplicative band across
/// the sweep. Rows need relative errors below 20% to count; undecided scenes
/// widen each ratio to an interval and the pessimistic ends are used.
VerifyReport verify_bounds(const SweepResult& result, double band);

std::string to_csv(const SweepResult& result);
std::string to_json_string(const SweepResult& result);

/// CSV header written by to_csv (fixed schema).
extern const char* const kCsvHeader;

/// Parses a config JSON document (same keys as the CLI flags).
RunConfig config_from_json_text(const std::string& text);
RadiusLaw radius_law_from_json_text(const std::string& text);

/// Reads back a sweep CSV produced by to_csv (for offline verification).
SweepResult sweep_from_csv(const std::string& text);

}  // namespace sightline::harness
