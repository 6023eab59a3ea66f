#pragma once

#include <cstdint>
#include <vector>

#include "sightline/estimate.hpp"
#include "sightline/vec.hpp"

namespace sightline::geom {

struct Segment {
  Vec a;
  Vec b;
  Segment() = default;
  Segment(Vec a_, Vec b_) : a(a_), b(b_) { require_same_dim(a, b); }
  int dim() const { return a.dim(); }
  double length() const { return dist(a, b); }
};

struct Capsule {
  Segment seg;
  double radius = 0;
  Capsule() = default;
  Capsule(Segment s, double rho);
  int dim() const { return seg.dim(); }
};

struct Ball {
  Vec center;
  double radius = 0;
  Ball() = default;
  Ball(Vec c, double rho);
  int dim() const { return center.dim(); }
};

/// Doubly infinite solid cylinder: the axis passes through `point` (the
/// closest point of the axis to the origin) with unit `direction`.
struct LineObstacle {
  Vec point;
  Vec direction;
  double radius = 0;
  LineObstacle() = default;
  LineObstacle(Vec foot, Vec dir, double rho);
  int dim() const { return point.dim(); }
};

/// Deterministic covering of the sphere of radius r about the origin: every
/// point of the sphere lies within `delta` of some center, and the center
/// count is O((r/delta)^(d-1)).
struct SphereCover {
  double r = 0;
  double delta = 0;
  std::vector<Vec> centers;
};

double dist_point_segment(const Vec& p, const Segment& s);
double dist_segment_segment(const Segment& s1, const Segment& s2);
/// Distance from a point to the closed ball / capsule (zero inside the set).
double dist_point_ball(const Vec& p, const Ball& b);
double dist_point_capsule(const Vec& p, const Capsule& c);
/// Distance to the full line through `line.point` with direction `line.direction`
/// (the obstacle radius plays no role here).
double dist_segment_line(const Segment& s, const LineObstacle& line);

/// Volume of the s-dimensional Euclidean unit ball (kappa_0 = 1).
double unit_ball_volume(int s);

/// Lebesgue volume of the closed rho-neighborhood of a segment of the given
/// length: length + 2*rho in d=1, kappa_{d-1} rho^{d-1} length + kappa_d rho^d
/// for d >= 2.
double capsule_volume(int d, double length, double rho);

/// A coordinate-hyperplane projection keeping both vector norms and the angle
/// between them within a factor 1/sqrt(d) of the originals. Such an axis
/// always exists for d >= 3; ties break to the smallest axis (0-based).
struct AxisProjection {
  int axis = 0;  // dropped coordinate, 0-based
  Vec px;        // x with that coordinate zeroed
  Vec py;
};
AxisProjection best_projection(const Vec& x, const Vec& y);

SphereCover sphere_cover(int d, double r, double delta);

/// Unbiased rejection-sampling estimate of the volume of the symmetric
/// difference of two capsules anchored at the origin.
ValueEstimate symdiff_volume_mc(const Capsule& c1, const Capsule& c2, std::int64_t n,
                                std::uint64_t seed);

}  // namespace sightline::geom
