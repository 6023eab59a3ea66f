#include "sightline/geom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sightline/rng.hpp"

namespace sightline::geom {

namespace {
constexpr double kPi = std::numbers::pi;

double checked_radius(double rho) {
  if (!(rho > 0)) throw std::invalid_argument("radius must be positive");
  return rho;
}
}  // namespace

Capsule::Capsule(Segment s, double rho) : seg(s), radius(checked_radius(rho)) {}

Ball::Ball(Vec c, double rho) : center(c), radius(checked_radius(rho)) {}

LineObstacle::LineObstacle(Vec foot, Vec dir, double rho)
    : point(foot), direction(dir), radius(checked_radius(rho)) {
  require_same_dim(point, direction);
  if (std::abs(norm(direction) - 1.0) > 1e-12)
    throw std::invalid_argument("line direction must be a unit vector");
  if (std::abs(dot(point, direction)) > 1e-9)
    throw std::invalid_argument("line foot point must be orthogonal to the direction");
}

double dist_point_segment(const Vec& p, const Segment& s) {
  require_same_dim(p, s.a);
  return std::sqrt(kernel::dist2_point_segment(p.data(), s.a.data(), s.b.data(), p.dim()));
}

double dist_segment_segment(const Segment& s1, const Segment& s2) {
  require_same_dim(s1.a, s2.a);
  return std::sqrt(
      kernel::dist2_segment_segment(s1.a.data(), s1.b.data(), s2.a.data(), s2.b.data(), s1.dim()));
}

double dist_point_ball(const Vec& p, const Ball& b) {
  return std::max(0.0, dist(p, b.center) - b.radius);
}

double dist_point_capsule(const Vec& p, const Capsule& c) {
  return std::max(0.0, dist_point_segment(p, c.seg) - c.radius);
}

double dist_segment_line(const Segment& s, const LineObstacle& line) {
  require_same_dim(s.a, line.point);
  return std::sqrt(kernel::dist2_segment_line(s.a.data(), s.b.data(), line.point.data(),
                                              line.direction.data(), s.dim()));
}

double unit_ball_volume(int s) {
  if (s < 0) throw std::invalid_argument("unit_ball_volume: s must be >= 0");
  return std::pow(kPi, s / 2.0) / std::tgamma(s / 2.0 + 1.0);
}

double capsule_volume(int d, double length, double rho) {
  if (d < 1) throw std::invalid_argument("capsule_volume: d must be >= 1");
  if (length < 0) throw std::invalid_argument("capsule_volume: negative length");
  checked_radius(rho);
  if (d == 1) return length + 2 * rho;
  return unit_ball_volume(d - 1) * std::pow(rho, d - 1) * length +
         unit_ball_volume(d) * std::pow(rho, d);
}

namespace {
// |u|^2 |v|^2 - (u.v)^2, clamped at 0; equals (|u||v| sin(angle))^2.
double cross2(const Vec& u, const Vec& v) {
  double c = norm2(u) * norm2(v) - dot(u, v) * dot(u, v);
  return c > 0 ? c : 0.0;
}
}  // namespace

AxisProjection best_projection(const Vec& x, const Vec& y) {
  require_same_dim(x, y);
  const int d = x.dim();
  if (d < 3) throw std::invalid_argument("best_projection: requires d >= 3");
  const double x2 = norm2(x), y2 = norm2(y);
  if (x2 <= 0 || y2 <= 0) throw std::invalid_argument("best_projection: zero vector");
  const double cxy = cross2(x, y);

  auto project = [&](int i) {
    AxisProjection p;
    p.axis = i;
    p.px = x;
    p.py = y;
    p.px[i] = 0;
    p.py[i] = 0;
    return p;
  };

  int best = -1;
  double best_margin = 0;
  for (int i = 0; i < d; ++i) {
    AxisProjection p = project(i);
    double px2 = norm2(p.px), py2 = norm2(p.py);
    // All three conditions in squared form.
    double m1 = d * px2 - x2;
    double m2 = d * py2 - y2;
    double m3 = d * cross2(p.px, p.py) * x2 * y2 - cxy * px2 * py2;
    if (m1 >= 0 && m2 >= 0 && m3 >= 0) return p;
    // Relative worst margin, used only as a fallback when rounding pushes
    // every axis slightly negative.
    double s3 = d * x2 * y2 * (px2 * py2 + 1e-300);
    double m = std::min({m1 / (d * x2), m2 / (d * y2), m3 / s3});
    if (best < 0 || m > best_margin) {
      best = i;
      best_margin = m;
    }
  }
  return project(best);
}

namespace {
// Recursive product grid. Budget splits in half at each level: rings resolve
// the polar angle to delta/2 and each ring sphere is covered to delta/2.
void cover_rec(int d, double r, double delta, std::vector<double>& suffix,
               std::vector<Vec>& out, int full_dim) {
  auto emit = [&](std::initializer_list<double> head) {
    // Coordinate layout: terminal-level coordinates first, then the polar
    // heights in recursion order. A fixed permutation of coordinates maps
    // this to the nested parametrization, so the covering property holds.
    Vec v(full_dim);
    int i = 0;
    for (double h : head) v[i++] = h;
    for (double z : suffix) v[i++] = z;
    out.push_back(v);
  };
  if (d == 1) {
    emit({r});
    emit({-r});
    return;
  }
  if (d == 2) {
    long m = std::max(1L, long(std::ceil(kPi * r / delta)));
    for (long k = 0; k < m; ++k) {
      double th = 2 * kPi * double(k) / double(m);
      emit({r * std::cos(th), r * std::sin(th)});
    }
    return;
  }
  long m_lat = std::max(1L, long(std::ceil(kPi * r / delta)));
  for (long j = 0; j < m_lat; ++j) {
    double theta = (double(j) + 0.5) * kPi / double(m_lat);
    suffix.push_back(r * std::cos(theta));
    cover_rec(d - 1, r * std::sin(theta), delta / 2, suffix, out, full_dim);
    suffix.pop_back();
  }
}
}  // namespace

SphereCover sphere_cover(int d, double r, double delta) {
  if (d < 1 || d > Vec::kMaxDim) throw std::invalid_argument("sphere_cover: bad dimension");
  if (!(r > 0)) throw std::invalid_argument("sphere_cover: r must be positive");
  if (!(delta > 0)) throw std::invalid_argument("sphere_cover: delta must be positive");
  SphereCover cover;
  cover.r = r;
  cover.delta = delta;
  std::vector<double> suffix;
  cover_rec(d, r, delta, suffix, cover.centers, d);
  return cover;
}

ValueEstimate symdiff_volume_mc(const Capsule& c1, const Capsule& c2, std::int64_t n,
                                std::uint64_t seed) {
  require_same_dim(c1.seg.a, c2.seg.a);
  if (n <= 0) throw std::invalid_argument("symdiff_volume_mc: n must be positive");
  const int d = c1.dim();
  auto anchored = [](const Capsule& c) { return norm(c.seg.a) <= 1e-12 * (1 + norm(c.seg.b)); };
  if (!anchored(c1) || !anchored(c2))
    throw std::invalid_argument("symdiff_volume_mc: capsules must be anchored at the origin");

  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::min({0.0, c1.seg.b[i] - c1.radius, c2.seg.b[i] - c2.radius}) -
            std::max(c1.radius, c2.radius);
    hi[i] = std::max({0.0, c1.seg.b[i] + c1.radius, c2.seg.b[i] + c2.radius}) +
            std::max(c1.radius, c2.radius);
  }
  double box_vol = 1;
  for (int i = 0; i < d; ++i) box_vol *= hi[i] - lo[i];

  Rng rng = make_stream(seed, stream_tag::kSymdiff, 0);
  const double r1sq = c1.radius * c1.radius;
  const double r2sq = c2.radius * c2.radius;
  std::int64_t hits = 0;
  Vec p(d);
  for (std::int64_t k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
    bool in1 =
        kernel::dist2_point_segment(p.data(), c1.seg.a.data(), c1.seg.b.data(), d) <= r1sq;
    bool in2 =
        kernel::dist2_point_segment(p.data(), c2.seg.a.data(), c2.seg.b.data(), d) <= r2sq;
    if (in1 != in2) ++hits;
  }
  return ValueEstimate::from_counts(box_vol, hits, n);
}

}  // namespace sightline::geom
