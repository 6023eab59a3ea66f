#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sightline/estimate.hpp"
#include "sightline/geom.hpp"
#include "sightline/rng.hpp"
#include "sightline/vec.hpp"

namespace sightline::analytic {

enum class ModelKind { kBoolean, kCylinders, kInterlacements };

std::string model_name(ModelKind m);
ModelKind model_from_name(const std::string& name);

/// Obstacle radius distribution with bounded support. Moments are exact for
/// the constant and discrete kinds and exact-per-segment for the piecewise
/// linear quantile table. Unbounded target laws are represented by a
/// quantile table truncated at a configurable quantile; the mass cut off is
/// recorded in truncated_tail_mass() so that downstream reports can carry it.
class RadiusLaw {
 public:
  enum class Kind { kConstant, kDiscrete, kQuantileTable };

  static RadiusLaw constant(double rho);
  /// atoms: (value, probability) pairs; probabilities must sum to 1.
  static RadiusLaw discrete(std::vector<std::pair<double, double>> atoms);
  /// Piecewise-linear inverse CDF through points (u[i], q[i]), u ascending in
  /// [0,1], q nondecreasing and nonnegative. `tail_mass` records the mass
  /// beyond the truncation quantile of the original law (0 for exact laws).
  static RadiusLaw quantile_table(std::vector<double> u, std::vector<double> q,
                                  double tail_mass = 0.0);

  Kind kind() const { return kind_; }
  double rho_max() const { return rho_max_; }
  double moment(int k) const;  // E[rho^k]
  double sample(Rng& rng) const;
  bool is_constant() const { return kind_ == Kind::kConstant; }
  double constant_value() const;
  double truncated_tail_mass() const { return tail_mass_; }
  /// Short textual form for result tables, e.g. "const:1".
  std::string spec_string() const;

 private:
  RadiusLaw() = default;
  double compute_moment(int k) const;

  Kind kind_ = Kind::kConstant;
  double rho_max_ = 0;
  double tail_mass_ = 0;
  std::vector<std::pair<double, double>> atoms_;  // discrete: (value, prob)
  std::vector<double> cum_;                       // discrete: cumulative probs
  std::vector<double> u_, q_;                     // quantile table
  std::vector<double> moments_;                   // cached E[rho^k], k = 0..kCachedMoments
  static constexpr int kCachedMoments = 12;
};

struct ModelParams {
  ModelKind model = ModelKind::kBoolean;
  int dim = 2;
  double alpha = 0;
  RadiusLaw radius = RadiusLaw::constant(1.0);

  ModelParams() = default;
  ModelParams(ModelKind m, int d, double a, RadiusLaw law);
  double rho() const { return radius.constant_value(); }
  double rho_max() const { return radius.rho_max(); }
};

/// Scale functions of the visibility window. delta is derived from phi*psi so
/// the identity delta(r) = 1/(phi(r)*psi(r)) holds exactly as floating point.
struct ScalingProfile {
  ModelKind model = ModelKind::kBoolean;
  int dim = 2;
  double min_r() const;
  double phi(double r) const;
  double psi(double r) const;
  double delta(double r) const { return 1.0 / (phi(r) * psi(r)); }
};

ScalingProfile scaling_profile(ModelKind model, int dim);

/// Expected occupied measure seen by a segment of length r in the ball model:
/// kappa_d E[rho^d] + kappa_{d-1} E[rho^{d-1}] r.
double boolean_mu_segment(int d, const RadiusLaw& law, double r);

/// Directional visibility probability of the ball model, exp(-alpha * mu).
double boolean_f(const ModelParams& params, double r);

/// E[sin(theta)] for theta the angle between a uniform direction on the
/// (d-1)-sphere and a fixed axis; one-dimensional adaptive quadrature.
double mean_projected_sine(int d);

/// Line-process measure of a capsule of length r and radius rho:
/// kappa_{d-1} rho^{d-1} + kappa_{d-2} rho^{d-2} r E[sin theta].
double cylinder_mu_capsule(int d, double rho, double r);

/// Directional visibility probability of the cylinder model.
double cylinder_f(const ModelParams& params, double r);

/// Capacity of a ball of radius s for d >= 3: 2 pi^{d/2} s^{d-2} / Gamma(d/2-1).
double ball_capacity(int d, double s);

/// Total mass of the launch measure on the sphere of radius R (equals the
/// capacity of that ball).
inline double sphere_measure_mass(int d, double R) { return ball_capacity(d, R); }

/// Rotation-averaged projected volume of the union of the capsules around
/// [0,x] and [0,r e1], estimated over n random rotations with an inner
/// rejection sampler per rotation.
ValueEstimate cylinder_mu_union_mc(const Vec& x, double r, double rho, int d, std::int64_t n,
                                   std::uint64_t seed);

/// pvis / ((r/delta)^{d-1} f).
double ratio_statistic(double pvis, double f, double r, double delta, int d);

/// Closed-form directional visibility where one exists (ball and cylinder
/// models); empty for interlacements.
std::optional<double> analytic_f(const ModelParams& params, double r);

}  // namespace sightline::analytic
