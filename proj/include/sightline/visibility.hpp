#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sightline/estimate.hpp"
#include "sightline/models.hpp"

namespace sightline::visibility {

using models::ModelParams;
using models::Scene;
using models::SimOptions;
using models::WindowSpec;

/// Union of closed angular intervals modulo 2*pi, kept sorted and disjoint.
class ArcSet {
 public:
  ArcSet() = default;
  /// Normalizes, splits wrap-around intervals and merges overlaps. Inputs are
  /// (start, end) with end - start in [0, 2*pi].
  static ArcSet from_intervals(std::vector<std::pair<double, double>> raw);
  static ArcSet full_circle();

  const std::vector<std::pair<double, double>>& arcs() const { return arcs_; }
  double total() const;
  bool covers_circle() const;
  /// Midpoint of the widest gap; only valid when not covering.
  double some_clear_angle() const;

 private:
  std::vector<std::pair<double, double>> arcs_;
};

/// Whether the segment [0, x] stays clear of every obstacle sausage.
bool segment_clear(const Scene& scene, const Vec& x);

/// Exact blocked direction set in the plane: one closed arc per obstacle,
/// computed from the tangent geometry in closed form.
ArcSet blocked_arcs_d2(const Scene& scene, double r);

enum class Visibility { kVisible, kBlocked, kUndecided };

/// Is some point of the sphere of radius r visible from the origin? Exact in
/// d=2. In d>=3 a direction grid of the given resolution is tested; a clear
/// direction certifies visibility, and blocking every grid direction with the
/// obstacle radii deflated by the grid resolution certifies total blockage
/// (the segment-obstacle distance is 1-Lipschitz in the endpoint). One
/// refinement round is attempted before reporting undecided.
Visibility visible_direction_exists(const Scene& scene, double r, int d, double resolution);

ProbEstimate estimate_f(const ModelParams& params, const WindowSpec& window, double r,
                        std::int64_t n, std::uint64_t seed, const SimOptions& opts = {});

struct PvisEstimate {
  ProbEstimate visible;       // counts certainly-visible scenes only
  std::int64_t undecided = 0;
  double p_lo = 0;            // hits / n
  double p_hi = 0;            // (hits + undecided) / n
};

PvisEstimate estimate_pvis(const ModelParams& params, const WindowSpec& window, double r,
                           std::int64_t n, std::uint64_t seed, double resolution,
                           const SimOptions& opts = {});

}  // namespace sightline::visibility
