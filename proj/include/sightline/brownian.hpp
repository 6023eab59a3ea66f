#pragma once

#include <cstdint>
#include <vector>

#include "sightline/analytic.hpp"
#include "sightline/geom.hpp"
#include "sightline/rng.hpp"
#include "sightline/vec.hpp"

namespace sightline::brownian {

/// Compact target with an exact distance oracle: a union of balls and
/// capsules. dist() is 1-Lipschitz and vanishes exactly on the set.
class Shape {
 public:
  static Shape ball(geom::Ball b);
  static Shape capsule(geom::Capsule c);
  Shape& add(geom::Ball b);
  Shape& add(geom::Capsule c);

  double dist(const Vec& p) const;
  int dim() const { return dim_; }
  /// Radius of a centered ball containing the set.
  double bound_radius() const { return bound_radius_; }
  /// Smallest obstacle radius; sets the absorption scale.
  double feature_scale() const { return feature_scale_; }
  /// Translate every part by t (capacity is translation invariant).
  Shape translated(const Vec& t) const;

 private:
  Shape() = default;
  void absorb(double part_bound, double part_scale, int d);

  std::vector<geom::Ball> balls_;
  std::vector<geom::Capsule> capsules_;
  int dim_ = 0;
  double bound_radius_ = 0;
  double feature_scale_ = 0;
};

struct WosConfig {
  double eps_hit = 0;         // absorption shell thickness
  double reentry_radius = 0;  // sphere that re-entry jumps land on; > bound_radius
  double decision_radius = 0; // walk position beyond this triggers an escape draw
  std::int64_t max_steps = 20000;

  static WosConfig defaults(const Shape& shape);
};

enum class WosOutcome { kHit, kMiss, kCensored };

struct CapacityEstimate {
  double value = 0;
  double se = 0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  std::int64_t censored = 0;
};

/// P[ hit the sphere of radius R2 before the sphere of radius R1 ] for a
/// Brownian motion started at norm y_norm, R1 < y_norm < R2.
double hitting_between_spheres(int d, double y_norm, double R1, double R2);

/// P[ never hit the sphere of radius R1 ] from norm y_norm >= R1, d >= 3.
double escape_prob(int d, double y_norm, double R1);

/// Exact sample of the Brownian entrance point on the sphere of radius R from
/// an exterior start y, conditioned on hitting (Poisson-kernel density,
/// rejection against the uniform law).
Vec sample_exterior_hit_point(const Vec& y, double R, Rng& rng);

/// Whether a Brownian path from `start` hits the shape. Walk-on-spheres while
/// inside the decision ball; outside it, an exact escape Bernoulli against the
/// re-entry sphere either ends the walk or re-enters it through the exterior
/// harmonic measure of that sphere.
WosOutcome wos_hits(const Shape& shape, const Vec& start, const WosConfig& cfg, Rng& rng);

/// Capacity of the shape: launch-measure mass on the sphere of radius R times
/// the hit fraction of walks started uniformly there. Requires the shape
/// inside B(0,R) and d >= 3.
CapacityEstimate capacity_mc(const Shape& shape, int d, double R, std::int64_t n,
                             std::uint64_t seed, int threads = 0);

/// Paired capacity difference cap(shape_b) - cap(shape_a) with common random
/// numbers (same starts and same draws per walk).
CapacityEstimate capacity_diff_mc(const Shape& shape_a, const Shape& shape_b, int d, double R,
                                  std::int64_t n, std::uint64_t seed, int threads = 0);

/// Interlacement directional visibility via the capacity route:
/// exp(-alpha * cap(capsule of length r, radius rho)), delta-method error.
ProbEstimate bi_f(const analytic::ModelParams& params, double r, std::int64_t n,
                  std::uint64_t seed, int threads = 0);

/// Conditional direction-to-direction visibility
/// exp(-alpha * (cap(union) - cap(single))) with common random numbers.
ProbEstimate bi_conditional_dir(const Vec& x, double r, const analytic::ModelParams& params,
                                std::int64_t n, std::uint64_t seed, int threads = 0);

}  // namespace sightline::brownian
