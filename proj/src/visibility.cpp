#include "sightline/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sightline/parallel.hpp"

namespace sightline::visibility {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr std::int64_t kScenesPerBatch = 64;
}  // namespace

// ---------------------------------------------------------------------------
// ArcSet

ArcSet ArcSet::from_intervals(std::vector<std::pair<double, double>> raw) {
  ArcSet out;
  std::vector<std::pair<double, double>> parts;
  for (auto [lo, hi] : raw) {
    double width = hi - lo;
    if (width < 0) throw std::invalid_argument("ArcSet: negative interval");
    if (width >= kTwoPi) {
      out.arcs_ = {{0.0, kTwoPi}};
      return out;
    }
    lo = std::fmod(lo, kTwoPi);
    if (lo < 0) lo += kTwoPi;
    hi = lo + width;
    if (hi <= kTwoPi) {
      parts.emplace_back(lo, hi);
    } else {
      parts.emplace_back(lo, kTwoPi);
      parts.emplace_back(0.0, hi - kTwoPi);
    }
  }
  std::sort(parts.begin(), parts.end());
  for (auto& p : parts) {
    if (!out.arcs_.empty() && p.first <= out.arcs_.back().second) {
      out.arcs_.back().second = std::max(out.arcs_.back().second, p.second);
    } else {
      out.arcs_.push_back(p);
    }
  }
  return out;
}

ArcSet ArcSet::full_circle() {
  ArcSet out;
  out.arcs_ = {{0.0, kTwoPi}};
  return out;
}

double ArcSet::total() const {
  double t = 0;
  for (auto& [lo, hi] : arcs_) t += hi - lo;
  return t;
}

bool ArcSet::covers_circle() const {
  if (arcs_.empty()) return false;
  // Arcs are disjoint and sorted; the circle is covered iff there is no gap,
  // including across the wrap point.
  if (arcs_.front().first > 0.0) return false;
  double end = 0.0;
  for (auto& [lo, hi] : arcs_) {
    if (lo > end) return false;
    end = std::max(end, hi);
  }
  return end >= kTwoPi;
}

double ArcSet::some_clear_angle() const {
  if (arcs_.empty()) return 0.0;
  // Widest gap between consecutive arcs (cyclically).
  double best_gap = -1, best_mid = 0;
  for (size_t i = 0; i < arcs_.size(); ++i) {
    double hi = arcs_[i].second;
    double next_lo = i + 1 < arcs_.size() ? arcs_[i + 1].first : arcs_.front().first + kTwoPi;
    double gap = next_lo - hi;
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = std::fmod(hi + gap / 2, kTwoPi);
    }
  }
  return best_mid;
}

// ---------------------------------------------------------------------------

bool segment_clear(const Scene& scene, const Vec& x) {
  Vec zero(x.dim());
  return !models::scene_blocks(scene, geom::Segment(zero, x));
}

namespace {

// Blocked arc of a single disk obstacle for segments [0, r u]. Returns false
// when the disk is out of reach; full=true when the disk covers the origin.
bool disk_blocked_arc(const Vec& c, double rho, double r, double* center, double* half,
                      bool* full) {
  double L = norm(c);
  if (L <= rho) {
    *full = true;
    return true;
  }
  *full = false;
  if (L - r > rho) return false;
  double beta;
  double chord2 = L * L - r * r;
  if (chord2 <= rho * rho) {
    beta = std::asin(std::min(1.0, rho / L));
  } else {
    beta = std::acos(std::clamp((L * L + r * r - rho * rho) / (2 * L * r), -1.0, 1.0));
  }
  *center = std::atan2(c[1], c[0]);
  *half = beta;
  return true;
}

// Blocked arc of a solid strip (line obstacle) in the plane.
bool strip_blocked_arc(const geom::LineObstacle& line, double r, double* center, double* half,
                       bool* full) {
  double L = norm(line.point);
  if (L <= line.radius) {
    *full = true;
    return true;
  }
  *full = false;
  double cosg = (L - line.radius) / r;
  if (cosg > 1.0) return false;
  *center = std::atan2(line.point[1], line.point[0]);
  *half = std::acos(std::max(-1.0, cosg));
  return true;
}

}  // namespace

ArcSet blocked_arcs_d2(const Scene& scene, double r) {
  if (models::scene_dim(scene) != 2)
    throw std::invalid_argument("blocked_arcs_d2: requires a planar scene");
  if (!(r > 0) || r > models::scene_r_window(scene) * (1 + 1e-9))
    throw std::invalid_argument("blocked_arcs_d2: r outside validated window");
  std::vector<std::pair<double, double>> raw;
  auto add = [&](double center, double half) {
    if (half <= 0) return;
    raw.emplace_back(center - half, center + half);
  };
  if (const auto* s = std::get_if<models::BooleanScene>(&scene)) {
    for (const auto& b : s->balls) {
      double center, half;
      bool full;
      if (disk_blocked_arc(b.center, b.radius, r, &center, &half, &full)) {
        if (full) return ArcSet::full_circle();
        add(center, half);
      }
    }
  } else if (const auto* s = std::get_if<models::CylinderScene>(&scene)) {
    for (const auto& line : s->lines) {
      double center, half;
      bool full;
      if (strip_blocked_arc(line, r, &center, &half, &full)) {
        if (full) return ArcSet::full_circle();
        add(center, half);
      }
    }
  } else {
    throw std::invalid_argument("blocked_arcs_d2: planar trajectory scenes do not exist");
  }
  return ArcSet::from_intervals(std::move(raw));
}

namespace {

Visibility grid_visibility(const Scene& scene, const geom::SphereCover& cover) {
  const int d = cover.centers.empty() ? 0 : cover.centers.front().dim();
  Vec zero(d);
  for (const Vec& c : cover.centers) {
    if (!models::scene_blocks(scene, geom::Segment(zero, c))) return Visibility::kVisible;
  }
  // Certification pass: blocked with radii deflated by the grid resolution
  // implies every intermediate direction is blocked as well.
  for (const Vec& c : cover.centers) {
    if (!models::scene_blocks(scene, geom::Segment(zero, c), cover.delta))
      return Visibility::kUndecided;
  }
  return Visibility::kBlocked;
}

Visibility vde_with_covers(const Scene& scene, const geom::SphereCover& coarse,
                           const geom::SphereCover& fine) {
  Visibility v = grid_visibility(scene, coarse);
  if (v != Visibility::kUndecided) return v;
  return grid_visibility(scene, fine);
}

}  // namespace

Visibility visible_direction_exists(const Scene& scene, double r, int d, double resolution) {
  if (!(resolution > 0)) throw std::invalid_argument("visible_direction_exists: bad resolution");
  if (models::scene_dim(scene) != d)
    throw std::invalid_argument("visible_direction_exists: dimension mismatch");
  if (r > models::scene_r_window(scene) * (1 + 1e-9))
    throw std::invalid_argument("visible_direction_exists: r outside validated window");
  if (d == 2) {
    return blocked_arcs_d2(scene, r).covers_circle() ? Visibility::kBlocked
                                                     : Visibility::kVisible;
  }
  geom::SphereCover coarse = geom::sphere_cover(d, r, resolution);
  geom::SphereCover fine = geom::sphere_cover(d, r, resolution / 2);
  return vde_with_covers(scene, coarse, fine);
}

// ---------------------------------------------------------------------------
// Estimators

ProbEstimate estimate_f(const ModelParams& params, const WindowSpec& window, double r,
                        std::int64_t n, std::uint64_t seed, const SimOptions& opts) {
  if (n <= 0) throw std::invalid_argument("estimate_f: n must be positive");
  if (r > window.r_window * (1 + 1e-9))
    throw std::invalid_argument("estimate_f: r outside window");
  const int d = params.dim;
  struct Counts {
    std::int64_t hits = 0;
    Counts& operator+=(const Counts& o) {
      hits += o.hits;
      return *this;
    }
  };
  std::int64_t nb = batch_count(n, kScenesPerBatch);
  Counts total = run_batches<Counts>(nb, opts.threads, [&](std::int64_t b) {
    Rng rng = make_stream(seed, stream_tag::kEstimateF, std::uint64_t(b));
    BatchRange br = batch_range(n, kScenesPerBatch, b);
    Counts c;
    Vec target = Vec::axis(d, 0, r);
    for (std::int64_t i = br.begin; i < br.end; ++i) {
      Scene scene = models::sample_scene(params, window, opts.disc, rng);
      if (segment_clear(scene, target)) ++c.hits;
    }
    return c;
  });
  return ProbEstimate::from_counts(total.hits, n);
}

PvisEstimate estimate_pvis(const ModelParams& params, const WindowSpec& window, double r,
                           std::int64_t n, std::uint64_t seed, double resolution,
                           const SimOptions& opts) {
  if (n <= 0) throw std::invalid_argument("estimate_pvis: n must be positive");
  if (!(resolution > 0)) throw std::invalid_argument("estimate_pvis: bad resolution");
  if (r > window.r_window * (1 + 1e-9))
    throw std::invalid_argument("estimate_pvis: r outside window");
  const int d = params.dim;

  geom::SphereCover coarse, fine;
  if (d >= 3) {
    coarse = geom::sphere_cover(d, r, resolution);
    fine = geom::sphere_cover(d, r, resolution / 2);
  }

  struct Counts {
    std::int64_t visible = 0;
    std::int64_t undecided = 0;
    Counts& operator+=(const Counts& o) {
      visible += o.visible;
      undecided += o.undecided;
      return *this;
    }
  };
  std::int64_t nb = batch_count(n, kScenesPerBatch);
  Counts total = run_batches<Counts>(nb, opts.threads, [&](std::int64_t b) {
    Rng rng = make_stream(seed, stream_tag::kEstimatePvis, std::uint64_t(b));
    BatchRange br = batch_range(n, kScenesPerBatch, b);
    Counts c;
    for (std::int64_t i = br.begin; i < br.end; ++i) {
      Scene scene = models::sample_scene(params, window, opts.disc, rng);
      Visibility v;
      if (d == 2) {
        v = blocked_arcs_d2(scene, r).covers_circle() ? Visibility::kBlocked
                                                      : Visibility::kVisible;
      } else {
        v = vde_with_covers(scene, coarse, fine);
      }
      if (v == Visibility::kVisible) ++c.visible;
      if (v == Visibility::kUndecided) ++c.undecided;
    }
    return c;
  });
  PvisEstimate out;
  out.visible = ProbEstimate::from_counts(total.visible, n);
  out.undecided = total.undecided;
  out.p_lo = double(total.visible) / double(n);
  out.p_hi = double(total.visible + total.undecided) / double(n);
  return out;
}

}  // namespace sightline::visibility
