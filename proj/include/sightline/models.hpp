#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sightline/analytic.hpp"
#include "sightline/geom.hpp"
#include "sightline/rng.hpp"
#include "sightline/vec.hpp"

namespace sightline::models {

using analytic::ModelKind;
using analytic::ModelParams;

/// Region of interest B(0, r_window) plus the declared obstacle reach beyond
/// it. Samplers draw everything that can intersect B(0, r_window) and nothing
/// is lost: the margin must cover the obstacle radius bound.
struct WindowSpec {
  double r_window = 0;
  double margin = 0;
};

struct BooleanScene {
  int dim = 0;
  double r_window = 0;
  double reach = 0;  // sampling region radius for ball centers
  std::vector<geom::Ball> balls;
};

struct CylinderScene {
  int dim = 0;
  double rho = 0;
  double r_window = 0;
  double reach = 0;  // lines pass within this distance of the origin
  std::vector<geom::LineObstacle> lines;
};

/// One simulated path piece: flat coordinates plus chunked bounding spheres
/// for fast distance pruning.
struct Polyline {
  int dim = 0;
  std::vector<double> pts;  // count * dim coordinates

  struct Chunk {
    double center[Vec::kMaxDim];
    double radius = 0;
    std::int64_t first = 0;  // covers points [first, last] inclusive
    std::int64_t last = 0;
  };
  std::vector<Chunk> chunks;

  std::int64_t count() const { return dim > 0 ? std::int64_t(pts.size()) / dim : 0; }
  const double* point(std::int64_t i) const { return pts.data() + i * dim; }
  void push(const Vec& p);
  void finalize();  // builds the chunk bounds
};

struct InterlacementScene {
  int dim = 0;
  double rho = 0;
  double step = 0;
  double entry_radius = 0;  // trajectories enter on this sphere
  double kill_radius = 0;
  double r_window = 0;
  double reach = 0;
  std::vector<Polyline> pieces;
  std::int64_t trajectory_count = 0;  // Poisson draw (pieces may split further)
};

using Scene = std::variant<BooleanScene, CylinderScene, InterlacementScene>;

/// Discretization knobs of the trajectory sampler. Zeros resolve to the
/// defaults, which scale with the sausage radius.
struct InterlacementDiscretization {
  double step = 0;             // Euler step; default 0.01 * rho^2
  double boundary_offset = 0;  // start offset of the conditioned leg; default 1e-3 * rho
  double kill_factor = 4.0;    // kill radius = factor * (r_window + rho)
  int check_stride = 1;        // escape checks every `stride` steps (2 pairs h with 2h)
  std::int64_t max_leg_points = 2000000;

  double resolved_step(double rho) const { return step > 0 ? step : 0.01 * rho * rho; }
  double resolved_offset(double rho) const {
    return boundary_offset > 0 ? boundary_offset : 1e-3 * rho;
  }
};

struct SimOptions {
  InterlacementDiscretization disc;
  int threads = 0;
};

BooleanScene sample_boolean(const ModelParams& params, const WindowSpec& window, Rng& rng);
CylinderScene sample_cylinders(const ModelParams& params, const WindowSpec& window, Rng& rng);
InterlacementScene sample_interlacements(const ModelParams& params, const WindowSpec& window,
                                         const InterlacementDiscretization& disc, Rng& rng);
Scene sample_scene(const ModelParams& params, const WindowSpec& window,
                   const InterlacementDiscretization& disc, Rng& rng);

/// Whether any obstacle sausage comes within `deflate` less than its radius
/// of the target segment. stride > 1 evaluates the coarse subsampled view of
/// trajectory scenes (used by the step-refinement checks).
bool scene_blocks(const Scene& scene, const geom::Segment& target, double deflate = 0.0,
                  int stride = 1);
bool scene_blocks(const Scene& scene, const geom::Ball& target);

/// True iff no obstacle meets the compact test set.
bool scene_empty(const Scene& scene, const geom::Ball& target);
bool scene_empty(const Scene& scene, const geom::Segment& target);

int scene_dim(const Scene& scene);
double scene_r_window(const Scene& scene);

/// Text dump (exact round trip) for debugging and determinism checks.
std::string scene_dump(const Scene& scene);
Scene scene_load(const std::string& text);

}  // namespace sightline::models
