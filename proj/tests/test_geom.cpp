#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sightline/geom.hpp"
#include "sightline/rng.hpp"

using namespace sightline;
using namespace sightline::geom;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: distance between a segment and a line by dense grid
// search over both parameters, refined once around the best cell.
double grid_dist_segment_line(const Segment& s, const Vec& q, const Vec& u, double u_range) {
  auto point_on_seg = [&](double t) { return s.a + t * (s.b - s.a); };
  double best = 1e300;
  double t_best = 0, v_best = 0;
  const int nt = 400, nv = 400;
  for (int i = 0; i <= nt; ++i) {
    double t = double(i) / nt;
    Vec p = point_on_seg(t);
    for (int j = 0; j <= nv; ++j) {
      double v = -u_range + 2 * u_range * double(j) / nv;
      double dd = dist(p, q + v * u);
      if (dd < best) {
        best = dd;
        t_best = t;
        v_best = v;
      }
    }
  }
  for (int i = -40; i <= 40; ++i) {
    double t = std::clamp(t_best + i / (40.0 * nt), 0.0, 1.0);
    Vec p = point_on_seg(t);
    for (int j = -40; j <= 40; ++j) {
      double v = v_best + j * (2 * u_range) / (40.0 * nv);
      best = std::min(best, dist(p, q + v * u));
    }
  }
  return best;
}

double grid_dist_segment_segment(const Segment& s1, const Segment& s2) {
  double best = 1e300;
  const int n = 600;
  for (int i = 0; i <= n; ++i) {
    Vec p = s1.a + (double(i) / n) * (s1.b - s1.a);
    for (int j = 0; j <= n; ++j) {
      Vec q = s2.a + (double(j) / n) * (s2.b - s2.a);
      best = std::min(best, dist(p, q));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("point-segment distance") {
  Segment s({-1.0, 0.0}, {1.0, 0.0});
  CHECK(dist_point_segment(Vec{0.0, 1.0}, s) == doctest::Approx(1.0));
  CHECK(dist_point_segment(Vec{2.0, 0.0}, s) == doctest::Approx(1.0));
  Segment degenerate({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
  CHECK(dist_point_segment(Vec{3.0, 4.0, 0.0}, degenerate) == doctest::Approx(5.0));
  CHECK_THROWS_AS(dist_point_segment(Vec{1.0, 2.0, 3.0}, s), std::invalid_argument);
}

TEST_CASE("segment-line distance") {
  Vec ex = Vec::axis(3, 0);
  LineObstacle x_axis(Vec(3), ex, 1.0);
  Segment s1({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  LineObstacle through_z(Vec{0.0, 0.0, 1.0}, Vec{0.0, 1.0, 0.0}, 1.0);
  CHECK(dist_segment_line(s1, through_z) == doctest::Approx(1.0));
  CHECK(dist_segment_line(s1, x_axis) == doctest::Approx(0.0));

  Segment s2({0.0, 0.0, 2.0}, {0.0, 0.0, 3.0});
  double oracle = grid_dist_segment_line(s2, Vec(3), ex, 10.0);
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(dist_segment_line(s2, x_axis) == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(dist_segment_line(s2, x_axis) == doctest::Approx(2.0));
}

TEST_CASE("segment-segment distance") {
  Segment a({0.0, 0.0}, {1.0, 0.0});
  Segment b({0.0, 1.0}, {1.0, 1.0});
  CHECK(dist_segment_segment(a, b) == doctest::Approx(1.0));

  Segment c({-1.0, -1.0}, {1.0, 1.0});
  Segment d({-1.0, 1.0}, {1.0, -1.0});
  CHECK(dist_segment_segment(c, d) == doctest::Approx(0.0));

  Segment s1({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  Segment s2({0.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
  double oracle = grid_dist_segment_segment(s1, s2);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(dist_segment_segment(s1, s2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("distance properties hold for random inputs") {
  Rng rng(7);
  for (int it = 0; it < 500; ++it) {
    int d = 2 + int(rng() % 3);
    auto rnd = [&] {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = 4 * uniform01(rng) - 2;
      return v;
    };
    Segment s(rnd(), rnd());
    Vec p = rnd(), q = rnd();
    double dp = dist_point_segment(p, s);
    double dq = dist_point_segment(q, s);
    CHECK(dp >= 0);
    // 1-Lipschitz in the query point.
    CHECK(std::abs(dp - dq) <= dist(p, q) + 1e-12);
    // Symmetry of the segment-segment distance.
    Segment t(rnd(), rnd());
    CHECK(dist_segment_segment(s, t) == doctest::Approx(dist_segment_segment(t, s)));
    // Zero iff intersecting: a point on the segment has distance zero.
    Vec on = s.a + uniform01(rng) * (s.b - s.a);
    CHECK(dist_point_segment(on, s) <= 1e-12);
  }
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0));
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * kPi / 3));
  CHECK_THROWS_AS(unit_ball_volume(-1), std::invalid_argument);
}

TEST_CASE("capsule volume") {
  CHECK(capsule_volume(2, 0.0, 1.0) == doctest::Approx(kPi));
  CHECK(capsule_volume(1, 3.0, 1.0) == doctest::Approx(5.0));
  CHECK(capsule_volume(3, 2.0, 1.0) == doctest::Approx(10 * kPi / 3));

  // Ball case for every dimension.
  for (int d = 1; d <= 5; ++d)
    for (double rho : {0.5, 1.0, 2.0})
      CHECK(capsule_volume(d, 0.0, rho) ==
            doctest::Approx(unit_ball_volume(d) * std::pow(rho, d)));

  // Rejection-sampling cross-check of the d=3 value.
  Rng rng(11);
  Segment seg({0.0, 0.0, 0.0}, {2.0, 0.0, 0.0});
  const std::int64_t n = 200000;
  std::int64_t hits = 0;
  double lox = -1, hix = 3, loy = -1, hiy = 1;
  double box = (hix - lox) * (hiy - loy) * (hiy - loy);
  for (std::int64_t i = 0; i < n; ++i) {
    Vec p{lox + (hix - lox) * uniform01(rng), loy + (hiy - loy) * uniform01(rng),
          loy + (hiy - loy) * uniform01(rng)};
    if (dist_point_segment(p, seg) <= 1.0) ++hits;
  }
  double est = box * double(hits) / double(n);
  double se = box * std::sqrt(0.25 / double(n));
  CHECK(std::abs(est - 10 * kPi / 3) <= 3 * se);
}

TEST_CASE("best projection basics") {
  Vec e1 = Vec::axis(3, 0), e2 = Vec::axis(3, 1);
  auto p = best_projection(e1, e2);
  CHECK(p.axis == 2);
  CHECK(norm(p.px) == doctest::Approx(1.0));
  CHECK(norm(p.py) == doctest::Approx(1.0));

  auto q = best_projection(e1, e1);
  CHECK(q.axis == 1);  // smallest admissible axis; dropping axis 0 kills the norm

  CHECK_THROWS_AS(best_projection(Vec{1.0, 0.0}, Vec{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(best_projection(Vec(3), e1), std::invalid_argument);
}

namespace {
bool axis_admissible(const Vec& x, const Vec& y, int i) {
  int d = x.dim();
  Vec px = x, py = y;
  px[i] = 0;
  py[i] = 0;
  double x2 = norm2(x), y2 = norm2(y), px2 = norm2(px), py2 = norm2(py);
  auto cr2 = [](const Vec& u, const Vec& v) {
    return std::max(0.0, norm2(u) * norm2(v) - dot(u, v) * dot(u, v));
  };
  return d * px2 >= x2 && d * py2 >= y2 && d * cr2(px, py) * x2 * y2 >= cr2(x, y) * px2 * py2;
}
}  // namespace

TEST_CASE("best projection on random pairs") {
  Rng rng(23);
  for (int d = 3; d <= 5; ++d) {
    for (int it = 0; it < 2000; ++it) {
      Vec x = gaussian_vec(d, rng), y = gaussian_vec(d, rng);
      if (norm(x) < 1e-6 || norm(y) < 1e-6) continue;
      // Exhaustive check: an admissible axis exists.
      bool any = false;
      int smallest = -1;
      for (int i = 0; i < d; ++i) {
        if (axis_admissible(x, y, i)) {
          if (!any) smallest = i;
          any = true;
        }
      }
      REQUIRE(any);
      auto p = best_projection(x, y);
      CHECK(p.axis == smallest);
      CHECK(axis_admissible(x, y, p.axis));
    }
  }
}

namespace {
// Fine audit of the covering property: densely probe the sphere and measure
// the worst distance to the nearest center.
double cover_worst_gap_d2(const SphereCover& cover, int probes) {
  double worst = 0;
  for (int i = 0; i < probes; ++i) {
    double th = 2 * kPi * double(i) / probes;
    Vec p{cover.r * std::cos(th), cover.r * std::sin(th)};
    double best = 1e300;
    for (const Vec& c : cover.centers) best = std::min(best, dist(p, c));
    worst = std::max(worst, best);
  }
  return worst;
}
}  // namespace

TEST_CASE("sphere cover d=2") {
  auto cover = sphere_cover(2, 1.0, kPi / 2);
  CHECK(cover.centers.size() <= 8);
  CHECK(cover_worst_gap_d2(cover, 100 * int(2 / (kPi / 2) * kPi)) <= kPi / 2 + 1e-12);

  auto antipodal = sphere_cover(2, 1.0, 2.0);
  CHECK(antipodal.centers.size() >= 2);

  CHECK_THROWS_AS(sphere_cover(2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sphere cover d=3 count and density") {
  auto cover = sphere_cover(3, 10.0, 1.0);
  CHECK(cover.centers.size() <= 20 * 100);  // C * (r/delta)^2 with C <= 20
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    Vec p = uniform_on_sphere(3, 10.0, rng);
    double best = 1e300;
    for (const Vec& c : cover.centers) best = std::min(best, dist(p, c));
    CHECK(best <= 1.0 + 1e-12);
  }
}

TEST_CASE("sphere cover d=4 density") {
  auto cover = sphere_cover(4, 3.0, 0.8);
  Rng rng(6);
  for (int i = 0; i < 4000; ++i) {
    Vec p = uniform_on_sphere(4, 3.0, rng);
    double best = 1e300;
    for (const Vec& c : cover.centers) best = std::min(best, dist(p, c));
    CHECK(best <= 0.8 + 1e-12);
  }
}

namespace {
// Deterministic quadrature oracle for planar capsule set volumes.
double grid_symdiff_d2(const Capsule& c1, const Capsule& c2, double cell) {
  double lo0 = std::min({0.0, c1.seg.b[0], c2.seg.b[0]}) - std::max(c1.radius, c2.radius);
  double hi0 = std::max({0.0, c1.seg.b[0], c2.seg.b[0]}) + std::max(c1.radius, c2.radius);
  double lo1 = std::min({0.0, c1.seg.b[1], c2.seg.b[1]}) - std::max(c1.radius, c2.radius);
  double hi1 = std::max({0.0, c1.seg.b[1], c2.seg.b[1]}) + std::max(c1.radius, c2.radius);
  long n0 = std::lround((hi0 - lo0) / cell);
  long n1 = std::lround((hi1 - lo1) / cell);
  double area = 0;
  for (long i = 0; i < n0; ++i) {
    for (long j = 0; j < n1; ++j) {
      Vec p{lo0 + (i + 0.5) * (hi0 - lo0) / n0, lo1 + (j + 0.5) * (hi1 - lo1) / n1};
      bool in1 = dist_point_segment(p, c1.seg) <= c1.radius;
      bool in2 = dist_point_segment(p, c2.seg) <= c2.radius;
      if (in1 != in2) area += (hi0 - lo0) / n0 * (hi1 - lo1) / n1;
    }
  }
  return area;
}
}  // namespace

TEST_CASE("symmetric difference volume") {
  Vec zero2(2);
  Capsule cap(Segment(zero2, Vec{10.0, 0.0}), 1.0);
  auto same = symdiff_volume_mc(cap, cap, 10000, 1);
  CHECK(same.value == 0.0);
  CHECK(same.se == 0.0);

  // Quadrature oracle vs the sampler on perpendicular capsules.
  Capsule oth(Segment(zero2, Vec{0.0, 10.0}), 1.0);
  double oracle = grid_symdiff_d2(cap, oth, 1.0 / 50);
  auto est = symdiff_volume_mc(cap, oth, 400000, 2);
  CHECK(std::abs(est.value - oracle) <= 3 * est.se + 0.05);

  // Opposite capsules intersect exactly in the origin ball, so the symmetric
  // difference is the volume sum minus twice that ball.
  Vec zero3(3);
  Capsule a3(Segment(zero3, Vec{4.0, 0.0, 0.0}), 0.5);
  Capsule c3(Segment(zero3, Vec{-4.0, 0.0, 0.0}), 0.5);
  double expect = 2 * capsule_volume(3, 4.0, 0.5) - 2 * unit_ball_volume(3) * std::pow(0.5, 3);
  auto est3 = symdiff_volume_mc(a3, c3, 500000, 3);
  CHECK(std::abs(est3.value - expect) <= 3 * est3.se + 0.02);

  CHECK_THROWS_AS(symdiff_volume_mc(cap, oth, 0, 1), std::invalid_argument);
}
