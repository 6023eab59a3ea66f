#include "sightline/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sightline/parallel.hpp"

namespace sightline::brownian {

namespace {
constexpr std::int64_t kWalksPerBatch = 512;
}

// ---------------------------------------------------------------------------
// Shape

Shape Shape::ball(geom::Ball b) {
  Shape s;
  s.add(b);
  return s;
}

Shape Shape::capsule(geom::Capsule c) {
  Shape s;
  s.add(c);
  return s;
}

void Shape::absorb(double part_bound, double part_scale, int d) {
  if (dim_ == 0) {
    dim_ = d;
    feature_scale_ = part_scale;
  } else if (dim_ != d) {
    throw std::invalid_argument("Shape: dimension mismatch");
  }
  bound_radius_ = std::max(bound_radius_, part_bound);
  feature_scale_ = std::min(feature_scale_, part_scale);
}

Shape& Shape::add(geom::Ball b) {
  absorb(norm(b.center) + b.radius, b.radius, b.dim());
  balls_.push_back(b);
  return *this;
}

Shape& Shape::add(geom::Capsule c) {
  absorb(std::max(norm(c.seg.a), norm(c.seg.b)) + c.radius, c.radius, c.dim());
  capsules_.push_back(c);
  return *this;
}

double Shape::dist(const Vec& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : balls_) best = std::min(best, geom::dist_point_ball(p, b));
  for (const auto& c : capsules_) best = std::min(best, geom::dist_point_capsule(p, c));
  return best;
}

Shape Shape::translated(const Vec& t) const {
  Shape s = *this;
  s.bound_radius_ = 0;
  double fs = s.feature_scale_;
  s.balls_.clear();
  s.capsules_.clear();
  s.dim_ = 0;
  for (auto b : balls_) {
    b.center += t;
    s.add(b);
  }
  for (auto c : capsules_) {
    c.seg.a += t;
    c.seg.b += t;
    s.add(c);
  }
  s.feature_scale_ = fs;
  return s;
}

// ---------------------------------------------------------------------------

WosConfig WosConfig::defaults(const Shape& shape) {
  WosConfig cfg;
  cfg.eps_hit = 1e-4 * shape.feature_scale();
  cfg.reentry_radius = 1.25 * shape.bound_radius();
  cfg.decision_radius = 2.5 * shape.bound_radius();
  return cfg;
}

double hitting_between_spheres(int d, double y_norm, double R1, double R2) {
  if (!(0 < R1 && R1 < y_norm && y_norm < R2))
    throw std::invalid_argument("hitting_between_spheres: need R1 < |y| < R2");
  if (d == 2) return (std::log(R1) - std::log(y_norm)) / (std::log(R1) - std::log(R2));
  if (d == 1 || d >= 3) {
    double p = 2.0 - d;
    if (d == 1) return (R1 - y_norm) / (R1 - R2);
    return (std::pow(R1, p) - std::pow(y_norm, p)) / (std::pow(R1, p) - std::pow(R2, p));
  }
  throw std::invalid_argument("hitting_between_spheres: bad dimension");
}

double escape_prob(int d, double y_norm, double R1) {
  if (d < 3) throw std::invalid_argument("escape_prob: requires d >= 3");
  if (!(R1 > 0) || y_norm < R1) throw std::invalid_argument("escape_prob: need |y| >= R1 > 0");
  return 1.0 - std::pow(R1 / y_norm, d - 2);
}

Vec sample_exterior_hit_point(const Vec& y, double R, Rng& rng) {
  const int d = y.dim();
  double yn = norm(y);
  if (!(yn > R)) throw std::invalid_argument("sample_exterior_hit_point: start not outside");
  // Conditioned hitting density on the sphere is proportional to |z-y|^{-d};
  // the nearest point bounds it, so rejection against uniform works.
  double gap = yn - R;
  for (;;) {
    Vec z = uniform_on_sphere(d, R, rng);
    double ratio = std::pow(gap * gap / kernel::dist2(z.data(), y.data(), d), d * 0.5);
    if (uniform01(rng) <= ratio) return z;
  }
}

WosOutcome wos_hits(const Shape& shape, const Vec& start, const WosConfig& cfg, Rng& rng) {
  const int d = shape.dim();
  if (d < 3) throw std::invalid_argument("wos_hits: requires d >= 3");
  if (start.dim() != d) throw std::invalid_argument("dimension mismatch");
  Vec y = start;
  for (std::int64_t step = 0; step < cfg.max_steps; ++step) {
    double dd = shape.dist(y);
    if (dd <= cfg.eps_hit) return WosOutcome::kHit;
    double yn = norm(y);
    if (yn >= cfg.decision_radius) {
      if (uniform01(rng) < escape_prob(d, yn, cfg.reentry_radius)) return WosOutcome::kMiss;
      y = sample_exterior_hit_point(y, cfg.reentry_radius, rng);
      continue;
    }
    y += uniform_on_sphere(d, dd, rng);
  }
  return WosOutcome::kCensored;
}

namespace {
struct HitCounts {
  std::int64_t hits = 0;
  std::int64_t censored = 0;
  HitCounts& operator+=(const HitCounts& o) {
    hits += o.hits;
    censored += o.censored;
    return *this;
  }
};
}  // namespace

CapacityEstimate capacity_mc(const Shape& shape, int d, double R, std::int64_t n,
                             std::uint64_t seed, int threads) {
  if (n <= 0) throw std::invalid_argument("capacity_mc: n must be positive");
  if (shape.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (R < shape.bound_radius())
    throw std::invalid_argument("capacity_mc: shape not contained in B(0,R)");
  WosConfig cfg = WosConfig::defaults(shape);
  std::int64_t nb = batch_count(n, kWalksPerBatch);
  HitCounts total = run_batches<HitCounts>(nb, threads, [&](std::int64_t b) {
    Rng rng = make_stream(seed, stream_tag::kCapacity, std::uint64_t(b));
    BatchRange br = batch_range(n, kWalksPerBatch, b);
    HitCounts c;
    for (std::int64_t i = br.begin; i < br.end; ++i) {
      Vec start = uniform_on_sphere(d, R, rng);
      WosOutcome o = wos_hits(shape, start, cfg, rng);
      if (o == WosOutcome::kHit) ++c.hits;
      if (o == WosOutcome::kCensored) ++c.censored;
    }
    return c;
  });
  double mass = analytic::sphere_measure_mass(d, R);
  double p = double(total.hits) / double(n);
  CapacityEstimate est;
  est.n = n;
  est.hits = total.hits;
  est.censored = total.censored;
  est.value = mass * p;
  est.se = mass * std::sqrt(p * (1 - p) / double(n));
  return est;
}

CapacityEstimate capacity_diff_mc(const Shape& shape_a, const Shape& shape_b, int d, double R,
                                  std::int64_t n, std::uint64_t seed, int threads) {
  if (n <= 0) throw std::invalid_argument("capacity_diff_mc: n must be positive");
  if (shape_a.dim() != d || shape_b.dim() != d)
    throw std::invalid_argument("dimension mismatch");
  if (R < std::max(shape_a.bound_radius(), shape_b.bound_radius()))
    throw std::invalid_argument("capacity_diff_mc: shapes not contained in B(0,R)");
  // A common configuration keeps the paired walks on identical draw sequences
  // until the two distance oracles actually differ.
  WosConfig cfg_a = WosConfig::defaults(shape_a);
  WosConfig cfg_b = WosConfig::defaults(shape_b);
  double reentry = std::max(cfg_a.reentry_radius, cfg_b.reentry_radius);
  double decision = std::max(cfg_a.decision_radius, cfg_b.decision_radius);
  WosConfig cfg;
  cfg.eps_hit = std::min(cfg_a.eps_hit, cfg_b.eps_hit);
  cfg.reentry_radius = reentry;
  cfg.decision_radius = decision;

  struct DiffCounts {
    std::int64_t sum_d = 0;
    std::int64_t sum_d2 = 0;
    std::int64_t hits_b = 0;
    std::int64_t censored = 0;
    DiffCounts& operator+=(const DiffCounts& o) {
      sum_d += o.sum_d;
      sum_d2 += o.sum_d2;
      hits_b += o.hits_b;
      censored += o.censored;
      return *this;
    }
  };
  std::int64_t nb = batch_count(n, kWalksPerBatch);
  DiffCounts total = run_batches<DiffCounts>(nb, threads, [&](std::int64_t b) {
    Rng rng = make_stream(seed, stream_tag::kCapacityPair, std::uint64_t(b));
    BatchRange br = batch_range(n, kWalksPerBatch, b);
    DiffCounts c;
    for (std::int64_t i = br.begin; i < br.end; ++i) {
      Vec start = uniform_on_sphere(d, R, rng);
      Rng walk_rng(rng());  // per-walk stream, cloned for the pair
      Rng rng_b = walk_rng;
      WosOutcome oa = wos_hits(shape_a, start, cfg, walk_rng);
      WosOutcome ob = wos_hits(shape_b, start, cfg, rng_b);
      if (oa == WosOutcome::kCensored || ob == WosOutcome::kCensored) ++c.censored;
      int da = oa == WosOutcome::kHit ? 1 : 0;
      int db = ob == WosOutcome::kHit ? 1 : 0;
      c.hits_b += db;
      c.sum_d += db - da;
      c.sum_d2 += (db - da) * (db - da);
    }
    return c;
  });
  double mass = analytic::sphere_measure_mass(d, R);
  double mean = double(total.sum_d) / double(n);
  double var = std::max(0.0, double(total.sum_d2) / double(n) - mean * mean);
  CapacityEstimate est;
  est.n = n;
  est.hits = total.hits_b;
  est.censored = total.censored;
  est.value = mass * mean;
  est.se = mass * std::sqrt(var / double(n));
  return est;
}

namespace {
// Centering a capsule before estimating shrinks the launch sphere and the
// variance; the capacity itself is translation invariant.
Shape centered_capsule(double r, double rho, int d) {
  Vec a = Vec::axis(d, 0, -r / 2);
  Vec b = Vec::axis(d, 0, r / 2);
  return Shape::capsule(geom::Capsule(geom::Segment(a, b), rho));
}
}  // namespace

ProbEstimate bi_f(const analytic::ModelParams& params, double r, std::int64_t n,
                  std::uint64_t seed, int threads) {
  if (params.model != analytic::ModelKind::kInterlacements)
    throw std::invalid_argument("bi_f: interlacement parameters required");
  const int d = params.dim;
  const double rho = params.rho();
  Shape shape = centered_capsule(r, rho, d);
  double R = 1.05 * shape.bound_radius();
  CapacityEstimate cap = capacity_mc(shape, d, R, n, seed, threads);
  ProbEstimate out;
  out.n = cap.n;
  out.hits = cap.hits;
  out.p_hat = std::exp(-params.alpha * cap.value);
  out.se = params.alpha * out.p_hat * cap.se;
  return out;
}

ProbEstimate bi_conditional_dir(const Vec& x, double r, const analytic::ModelParams& params,
                                std::int64_t n, std::uint64_t seed, int threads) {
  if (params.model != analytic::ModelKind::kInterlacements)
    throw std::invalid_argument("bi_conditional_dir: interlacement parameters required");
  const int d = params.dim;
  if (x.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (std::abs(norm(x) - r) > 1e-9 * (1 + r))
    throw std::invalid_argument("bi_conditional_dir: |x| must equal r");
  const double rho = params.rho();

  Vec e1r = Vec::axis(d, 0, r);
  Vec zero(d);
  // Shift both capsules so the union sits centered around the origin.
  Vec shift = (e1r + x) * -0.25;
  geom::Capsule single(geom::Segment(zero + shift, e1r + shift), rho);
  geom::Capsule other(geom::Segment(zero + shift, x + shift), rho);
  Shape shape_a = Shape::capsule(single);
  Shape shape_b = Shape::capsule(single);
  shape_b.add(other);
  double R = 1.05 * std::max(shape_a.bound_radius(), shape_b.bound_radius());
  CapacityEstimate diff = capacity_diff_mc(shape_a, shape_b, d, R, n, seed, threads);
  ProbEstimate out;
  out.n = diff.n;
  out.hits = diff.hits;
  out.p_hat = std::exp(-params.alpha * diff.value);
  out.se = params.alpha * out.p_hat * diff.se;
  return out;
}

}  // namespace sightline::brownian
