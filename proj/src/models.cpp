#include "sightline/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sightline/brownian.hpp"

namespace sightline::models {

namespace {
constexpr std::int64_t kChunkPoints = 32;

void require_margin(const WindowSpec& w, double needed) {
  if (!(w.r_window > 0)) throw std::invalid_argument("window: r_window must be positive");
  if (w.margin + 1e-12 < needed)
    throw std::invalid_argument("window: margin must cover the obstacle radius");
}
}  // namespace

// ---------------------------------------------------------------------------
// Polyline

void Polyline::push(const Vec& p) {
  if (dim == 0) dim = p.dim();
  for (int i = 0; i < dim; ++i) pts.push_back(p[i]);
}

void Polyline::finalize() {
  chunks.clear();
  std::int64_t n = count();
  if (n < 2) return;
  for (std::int64_t first = 0; first + 1 < n; first += kChunkPoints) {
    Chunk c;
    c.first = first;
    c.last = std::min(n - 1, first + kChunkPoints);
    double lo[Vec::kMaxDim], hi[Vec::kMaxDim];
    for (int k = 0; k < dim; ++k) {
      lo[k] = hi[k] = point(first)[k];
    }
    for (std::int64_t i = first; i <= c.last; ++i) {
      const double* p = point(i);
      for (int k = 0; k < dim; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    double rad2 = 0;
    for (int k = 0; k < dim; ++k) {
      c.center[k] = 0.5 * (lo[k] + hi[k]);
      double half = 0.5 * (hi[k] - lo[k]);
      rad2 += half * half;
    }
    c.radius = std::sqrt(rad2);
    chunks.push_back(c);
  }
}

// ---------------------------------------------------------------------------
// Samplers

BooleanScene sample_boolean(const ModelParams& params, const WindowSpec& window, Rng& rng) {
  if (params.model != ModelKind::kBoolean)
    throw std::invalid_argument("sample_boolean: ball-model parameters required");
  require_margin(window, params.rho_max());
  const int d = params.dim;
  BooleanScene scene;
  scene.dim = d;
  scene.r_window = window.r_window;
  scene.reach = window.r_window + params.rho_max();
  double mean = params.alpha * geom::unit_ball_volume(d) * std::pow(scene.reach, d);
  std::int64_t n = sample_poisson(mean, rng);
  scene.balls.reserve(size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Vec c = uniform_in_ball(d, scene.reach, rng);
    double rho = params.radius.sample(rng);
    scene.balls.emplace_back(c, rho);
  }
  return scene;
}

namespace {
// Deterministic orthonormal basis of the hyperplane orthogonal to unit u.
void orthonormal_complement(const Vec& u, std::vector<Vec>& basis) {
  const int d = u.dim();
  basis.clear();
  for (int j = 0; j < d && int(basis.size()) < d - 1; ++j) {
    Vec v = Vec::axis(d, j);
    v -= dot(v, u) * u;
    for (const Vec& w : basis) v -= dot(v, w) * w;
    double n = norm(v);
    if (n > 1e-8) basis.push_back(v * (1.0 / n));
  }
  if (int(basis.size()) != d - 1)
    throw std::logic_error("orthonormal_complement: degenerate direction");
}
}  // namespace

CylinderScene sample_cylinders(const ModelParams& params, const WindowSpec& window, Rng& rng) {
  if (params.model != ModelKind::kCylinders)
    throw std::invalid_argument("sample_cylinders: cylinder-model parameters required");
  require_margin(window, params.rho());
  const int d = params.dim;
  CylinderScene scene;
  scene.dim = d;
  scene.rho = params.rho();
  scene.r_window = window.r_window;
  scene.reach = window.r_window + scene.rho;
  double mean = params.alpha * geom::unit_ball_volume(d - 1) * std::pow(scene.reach, d - 1);
  std::int64_t n = sample_poisson(mean, rng);
  scene.lines.reserve(size_t(n));
  std::vector<Vec> basis;
  for (std::int64_t i = 0; i < n; ++i) {
    // Direction uniform on the sphere (antipodal pairs give the same line,
    // consistently with the invariant line measure), foot point uniform in
    // the (d-1)-ball of the orthogonal complement.
    Vec dir = uniform_on_sphere(d, 1.0, rng);
    orthonormal_complement(dir, basis);
    Vec coords = uniform_in_ball(d - 1, scene.reach, rng);
    Vec foot(d);
    for (int k = 0; k < d - 1; ++k) foot += coords[k] * basis[size_t(k)];
    // Numerical cleanup: keep the foot exactly orthogonal to the direction.
    foot -= dot(foot, dir) * dir;
    scene.lines.emplace_back(foot, dir, scene.rho);
  }
  return scene;
}

namespace {

struct LegCtx {
  InterlacementScene* scene;
  double h;
  double entry_radius;
  double kill_radius;
  int check_stride;
  std::int64_t max_points;
};

void gaussian_step(Vec& y, double scale, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int i = 0; i < y.dim(); ++i) y[i] += scale * nd(rng);
}

/// Forward leg: plain Euler Brownian steps. Crossings of the kill sphere
/// (checked every `check_stride` steps) trigger an exact escape Bernoulli
/// against the entry sphere; survivors re-enter on it through the exterior
/// harmonic measure and start a fresh piece.
void simulate_forward_leg(const Vec& entry, const LegCtx& ctx, Rng& rng) {
  const int d = entry.dim();
  const double root_h = std::sqrt(ctx.h);
  Polyline piece;
  piece.dim = d;
  piece.push(entry);
  Vec y = entry;
  std::int64_t local = 0;
  std::int64_t total = 0;
  for (;;) {
    gaussian_step(y, root_h, rng);
    piece.push(y);
    ++local;
    if (++total > ctx.max_points)
      throw std::runtime_error("interlacement sampler: step budget exceeded");
    if (local % ctx.check_stride == 0 && norm(y) >= ctx.kill_radius) {
      double p_escape = brownian::escape_prob(d, norm(y), ctx.entry_radius);
      if (uniform01(rng) < p_escape) break;
      piece.finalize();
      ctx.scene->pieces.push_back(std::move(piece));
      y = brownian::sample_exterior_hit_point(y, ctx.entry_radius, rng);
      piece = Polyline();
      piece.dim = d;
      piece.push(y);
      local = 0;
    }
  }
  piece.finalize();
  ctx.scene->pieces.push_back(std::move(piece));
}

/// Conditioned leg: Euler steps with the outward drift of the avoidance
/// transform h(y) = 1 - (R/|y|)^{d-2}. Steps shrink near the sphere so the
/// drift stays resolved; the leg never returns to the entry ball, so the
/// first kill-sphere crossing ends it outright.
void simulate_backward_leg(const Vec& entry, double offset, const LegCtx& ctx, Rng& rng) {
  const int d = entry.dim();
  const double R = ctx.entry_radius;
  Polyline piece;
  piece.dim = d;
  Vec y = entry * (1.0 + offset / norm(entry));
  piece.push(y);
  std::int64_t local = 0;
  std::int64_t total = 0;
  for (;;) {
    double s = norm(y);
    double gap = s - R;
    double hpow = std::pow(R / s, d - 2);
    double drift = (d - 2) * hpow / (s * (1.0 - hpow));  // |grad log h|
    double hs = std::min({ctx.h, 0.01 * gap * gap, 0.1 * gap / drift});
    Vec next = y;
    for (;;) {
      next = y + y * (drift * hs / s);
      gaussian_step(next, std::sqrt(hs), rng);
      if (norm(next) > R) break;  // overshoot into the avoided ball: redraw
    }
    y = next;
    piece.push(y);
    ++local;
    if (++total > ctx.max_points)
      throw std::runtime_error("interlacement sampler: step budget exceeded");
    if (local % ctx.check_stride == 0 && norm(y) >= ctx.kill_radius) break;
  }
  piece.finalize();
  ctx.scene->pieces.push_back(std::move(piece));
}

}  // namespace

InterlacementScene sample_interlacements(const ModelParams& params, const WindowSpec& window,
                                         const InterlacementDiscretization& disc, Rng& rng) {
  if (params.model != ModelKind::kInterlacements)
    throw std::invalid_argument("sample_interlacements: interlacement parameters required");
  require_margin(window, params.rho());
  const int d = params.dim;
  const double rho = params.rho();
  const double h = disc.resolved_step(rho);
  if (!(h > 0)) throw std::invalid_argument("sample_interlacements: step must be positive");
  if (disc.check_stride < 1) throw std::invalid_argument("bad check_stride");

  InterlacementScene scene;
  scene.dim = d;
  scene.rho = rho;
  scene.step = h;
  scene.r_window = window.r_window;
  scene.reach = window.r_window + rho;
  scene.entry_radius = scene.reach;
  scene.kill_radius = disc.kill_factor * scene.entry_radius;
  if (scene.kill_radius <= scene.entry_radius)
    throw std::invalid_argument("sample_interlacements: kill radius inside entry sphere");

  double mean = params.alpha * analytic::ball_capacity(d, scene.entry_radius);
  scene.trajectory_count = sample_poisson(mean, rng);

  LegCtx ctx{&scene, h, scene.entry_radius, scene.kill_radius, disc.check_stride,
             disc.max_leg_points};
  for (std::int64_t j = 0; j < scene.trajectory_count; ++j) {
    Vec entry = uniform_on_sphere(d, scene.entry_radius, rng);
    std::uint64_t leg_seed = rng();
    Rng fwd = make_stream(leg_seed, stream_tag::kSceneForward, 0);
    Rng bwd = make_stream(leg_seed, stream_tag::kSceneBackward, 0);
    simulate_forward_leg(entry, ctx, fwd);
    simulate_backward_leg(entry, disc.resolved_offset(rho), ctx, bwd);
  }
  return scene;
}

Scene sample_scene(const ModelParams& params, const WindowSpec& window,
                   const InterlacementDiscretization& disc, Rng& rng) {
  switch (params.model) {
    case ModelKind::kBoolean: return sample_boolean(params, window, rng);
    case ModelKind::kCylinders: return sample_cylinders(params, window, rng);
    case ModelKind::kInterlacements:
      return sample_interlacements(params, window, disc, rng);
  }
  throw std::logic_error("bad model");
}

// ---------------------------------------------------------------------------
// Queries

namespace {

void require_segment_in_window(double r_window, const geom::Segment& s) {
  if (norm(s.a) > r_window * (1 + 1e-9) || norm(s.b) > r_window * (1 + 1e-9))
    throw std::invalid_argument("target outside validated window");
}

void require_ball_in_window(double r_window, const geom::Ball& b) {
  if (norm(b.center) + b.radius > r_window * (1 + 1e-9))
    throw std::invalid_argument("target outside validated window");
}

bool polyline_blocks_segment(const Polyline& pl, const geom::Segment& seg, double radius,
                             int stride) {
  const int d = pl.dim;
  const double r2 = radius * radius;
  const double* sa = seg.a.data();
  const double* sb = seg.b.data();
  for (const auto& ch : pl.chunks) {
    double bound = ch.radius + radius;
    if (kernel::dist2_point_segment(ch.center, sa, sb, d) > bound * bound) continue;
    std::int64_t i0 = ch.first;
    if (stride > 1 && i0 % stride != 0) i0 += stride - (i0 % stride);
    for (std::int64_t i = i0; i + stride <= ch.last; i += stride) {
      if (kernel::dist2_segment_segment(pl.point(i), pl.point(i + stride), sa, sb, d) <= r2)
        return true;
    }
    // Tail edge of the piece when its length is not a stride multiple.
    if (stride > 1) {
      std::int64_t n = pl.count();
      std::int64_t last_aligned = ((n - 1) / stride) * stride;
      if (last_aligned < n - 1 && last_aligned >= ch.first && n - 1 <= ch.last) {
        if (kernel::dist2_segment_segment(pl.point(last_aligned), pl.point(n - 1), sa, sb, d) <=
            r2)
          return true;
      }
    }
  }
  return false;
}

bool polyline_blocks_ball(const Polyline& pl, const geom::Ball& ball, double radius) {
  const int d = pl.dim;
  const double reach = radius + ball.radius;
  const double* c = ball.center.data();
  for (const auto& ch : pl.chunks) {
    double bound = ch.radius + reach;
    if (kernel::dist2(ch.center, c, d) > bound * bound) continue;
    for (std::int64_t i = ch.first; i < ch.last; ++i) {
      if (kernel::dist2_point_segment(c, pl.point(i), pl.point(i + 1), d) <= reach * reach)
        return true;
    }
  }
  return false;
}

}  // namespace

bool scene_blocks(const Scene& scene, const geom::Segment& target, double deflate, int stride) {
  if (const auto* s = std::get_if<BooleanScene>(&scene)) {
    require_segment_in_window(s->r_window, target);
    for (const auto& b : s->balls) {
      double r = b.radius - deflate;
      if (r > 0 && geom::dist_point_segment(b.center, target) <= r) return true;
    }
    return false;
  }
  if (const auto* s = std::get_if<CylinderScene>(&scene)) {
    require_segment_in_window(s->r_window, target);
    double r = s->rho - deflate;
    if (r <= 0) return false;
    for (const auto& line : s->lines) {
      if (geom::dist_segment_line(target, line) <= r) return true;
    }
    return false;
  }
  const auto& s = std::get<InterlacementScene>(scene);
  require_segment_in_window(s.r_window, target);
  double r = s.rho - deflate;
  if (r <= 0) return false;
  for (const auto& pl : s.pieces) {
    if (polyline_blocks_segment(pl, target, r, stride)) return true;
  }
  return false;
}

bool scene_blocks(const Scene& scene, const geom::Ball& target) {
  if (const auto* s = std::get_if<BooleanScene>(&scene)) {
    require_ball_in_window(s->r_window, target);
    for (const auto& b : s->balls) {
      if (dist(b.center, target.center) <= b.radius + target.radius) return true;
    }
    return false;
  }
  if (const auto* s = std::get_if<CylinderScene>(&scene)) {
    require_ball_in_window(s->r_window, target);
    double reach = s->rho + target.radius;
    for (const auto& line : s->lines) {
      // Distance from the ball center to the axis line.
      Vec w = target.center - line.point;
      double d2 = norm2(w) - dot(w, line.direction) * dot(w, line.direction);
      if (d2 <= reach * reach) return true;
    }
    return false;
  }
  const auto& s = std::get<InterlacementScene>(scene);
  require_ball_in_window(s.r_window, target);
  for (const auto& pl : s.pieces) {
    if (polyline_blocks_ball(pl, target, s.rho)) return true;
  }
  return false;
}

bool scene_empty(const Scene& scene, const geom::Ball& target) {
  return !scene_blocks(scene, target);
}

bool scene_empty(const Scene& scene, const geom::Segment& target) {
  return !scene_blocks(scene, target, 0.0, 1);
}

int scene_dim(const Scene& scene) {
  return std::visit([](const auto& s) { return s.dim; }, scene);
}

double scene_r_window(const Scene& scene) {
  return std::visit([](const auto& s) { return s.r_window; }, scene);
}

// ---------------------------------------------------------------------------
// Dump / load

namespace {
void put(std::ostringstream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}
}  // namespace

std::string scene_dump(const Scene& scene) {
  std::ostringstream os;
  os << "sightline-scene 1\n";
  if (const auto* s = std::get_if<BooleanScene>(&scene)) {
    os << "model boolean\ndim " << s->dim << "\nr_window ";
    put(os, s->r_window);
    os << "\nreach ";
    put(os, s->reach);
    os << "\ncount " << s->balls.size() << "\n";
    for (const auto& b : s->balls) {
      put(os, b.radius);
      for (int k = 0; k < s->dim; ++k) {
        os << ' ';
        put(os, b.center[k]);
      }
      os << '\n';
    }
  } else if (const auto* s = std::get_if<CylinderScene>(&scene)) {
    os << "model cylinders\ndim " << s->dim << "\nrho ";
    put(os, s->rho);
    os << "\nr_window ";
    put(os, s->r_window);
    os << "\nreach ";
    put(os, s->reach);
    os << "\ncount " << s->lines.size() << "\n";
    for (const auto& l : s->lines) {
      bool first = true;
      for (int k = 0; k < s->dim; ++k) {
        if (!first) os << ' ';
        put(os, l.point[k]);
        first = false;
      }
      for (int k = 0; k < s->dim; ++k) {
        os << ' ';
        put(os, l.direction[k]);
      }
      os << '\n';
    }
  } else {
    const auto& s = std::get<InterlacementScene>(scene);
    os << "model interlacements\ndim " << s.dim << "\nrho ";
    put(os, s.rho);
    os << "\nstep ";
    put(os, s.step);
    os << "\nentry_radius ";
    put(os, s.entry_radius);
    os << "\nkill_radius ";
    put(os, s.kill_radius);
    os << "\nr_window ";
    put(os, s.r_window);
    os << "\nreach ";
    put(os, s.reach);
    os << "\ntrajectories " << s.trajectory_count << "\npieces " << s.pieces.size() << "\n";
    for (const auto& pl : s.pieces) {
      os << "piece " << pl.count() << "\n";
      for (std::int64_t i = 0; i < pl.count(); ++i) {
        const double* p = pl.point(i);
        for (int k = 0; k < s.dim; ++k) {
          if (k) os << ' ';
          put(os, p[k]);
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

Scene scene_load(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "sightline-scene" || version != 1)
    throw std::invalid_argument("scene_load: bad header");
  std::string key, model;
  is >> key >> model;
  if (key != "model") throw std::invalid_argument("scene_load: bad format");
  auto expect = [&](const char* want) {
    is >> key;
    if (key != want) throw std::invalid_argument("scene_load: bad format");
  };
  if (model == "boolean") {
    BooleanScene s;
    expect("dim");
    is >> s.dim;
    expect("r_window");
    is >> s.r_window;
    expect("reach");
    is >> s.reach;
    expect("count");
    std::int64_t n;
    is >> n;
    for (std::int64_t i = 0; i < n; ++i) {
      double rho;
      is >> rho;
      Vec c(s.dim);
      for (int k = 0; k < s.dim; ++k) is >> c[k];
      s.balls.emplace_back(c, rho);
    }
    if (!is) throw std::invalid_argument("scene_load: truncated");
    return s;
  }
  if (model == "cylinders") {
    CylinderScene s;
    expect("dim");
    is >> s.dim;
    expect("rho");
    is >> s.rho;
    expect("r_window");
    is >> s.r_window;
    expect("reach");
    is >> s.reach;
    expect("count");
    std::int64_t n;
    is >> n;
    for (std::int64_t i = 0; i < n; ++i) {
      Vec foot(s.dim), dir(s.dim);
      for (int k = 0; k < s.dim; ++k) is >> foot[k];
      for (int k = 0; k < s.dim; ++k) is >> dir[k];
      s.lines.emplace_back(foot, dir, s.rho);
    }
    if (!is) throw std::invalid_argument("scene_load: truncated");
    return s;
  }
  if (model == "interlacements") {
    InterlacementScene s;
    expect("dim");
    is >> s.dim;
    expect("rho");
    is >> s.rho;
    expect("step");
    is >> s.step;
    expect("entry_radius");
    is >> s.entry_radius;
    expect("kill_radius");
    is >> s.kill_radius;
    expect("r_window");
    is >> s.r_window;
    expect("reach");
    is >> s.reach;
    expect("trajectories");
    is >> s.trajectory_count;
    expect("pieces");
    std::int64_t np;
    is >> np;
    for (std::int64_t p = 0; p < np; ++p) {
      expect("piece");
      std::int64_t n;
      is >> n;
      Polyline pl;
      pl.dim = s.dim;
      pl.pts.resize(size_t(n * s.dim));
      for (std::int64_t i = 0; i < n * s.dim; ++i) is >> pl.pts[size_t(i)];
      pl.finalize();
      s.pieces.push_back(std::move(pl));
    }
    if (!is) throw std::invalid_argument("scene_load: truncated");
    return s;
  }
  throw std::invalid_argument("scene_load: unknown model " + model);
}

}  // namespace sightline::models
