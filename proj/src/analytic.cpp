#include "sightline/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sightline::analytic {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::kBoolean: return "boolean";
    case ModelKind::kCylinders: return "cylinders";
    case ModelKind::kInterlacements: return "interlacements";
  }
  throw std::logic_error("bad model");
}

ModelKind model_from_name(const std::string& name) {
  if (name == "boolean") return ModelKind::kBoolean;
  if (name == "cylinders") return ModelKind::kCylinders;
  if (name == "interlacements") return ModelKind::kInterlacements;
  throw std::invalid_argument("unknown model: " + name);
}

// ---------------------------------------------------------------------------
// RadiusLaw

RadiusLaw RadiusLaw::constant(double rho) {
  if (!(rho > 0)) throw std::invalid_argument("RadiusLaw: rho must be positive");
  RadiusLaw law;
  law.kind_ = Kind::kConstant;
  law.rho_max_ = rho;
  law.moments_.resize(kCachedMoments + 1);
  for (int k = 0; k <= kCachedMoments; ++k) law.moments_[k] = std::pow(rho, k);
  return law;
}

RadiusLaw RadiusLaw::discrete(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw std::invalid_argument("RadiusLaw: no atoms");
  double total = 0, rmax = 0;
  for (auto& [v, p] : atoms) {
    if (!(v > 0) || !(p >= 0)) throw std::invalid_argument("RadiusLaw: bad atom");
    total += p;
    rmax = std::max(rmax, v);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("RadiusLaw: probabilities must sum to 1");
  RadiusLaw law;
  law.kind_ = Kind::kDiscrete;
  law.atoms_ = std::move(atoms);
  law.rho_max_ = rmax;
  double cum = 0;
  for (auto& [v, p] : law.atoms_) {
    cum += p;
    law.cum_.push_back(cum);
  }
  law.cum_.back() = 1.0;
  law.moments_.resize(kCachedMoments + 1);
  for (int k = 0; k <= kCachedMoments; ++k) law.moments_[k] = law.compute_moment(k);
  return law;
}

RadiusLaw RadiusLaw::quantile_table(std::vector<double> u, std::vector<double> q,
                                    double tail_mass) {
  if (u.size() != q.size() || u.size() < 2)
    throw std::invalid_argument("RadiusLaw: table needs >= 2 aligned points");
  if (u.front() != 0.0 || u.back() != 1.0)
    throw std::invalid_argument("RadiusLaw: quantile grid must span [0,1]");
  for (size_t i = 0; i + 1 < u.size(); ++i)
    if (!(u[i] < u[i + 1]) || q[i] > q[i + 1])
      throw std::invalid_argument("RadiusLaw: table must be increasing in u, nondecreasing in q");
  if (!(q.front() >= 0) || !(q.back() > 0))
    throw std::invalid_argument("RadiusLaw: radii must be nonnegative with positive maximum");
  RadiusLaw law;
  law.kind_ = Kind::kQuantileTable;
  law.u_ = std::move(u);
  law.q_ = std::move(q);
  law.rho_max_ = law.q_.back();
  law.tail_mass_ = tail_mass;
  law.moments_.resize(kCachedMoments + 1);
  for (int k = 0; k <= kCachedMoments; ++k) law.moments_[k] = law.compute_moment(k);
  return law;
}

double RadiusLaw::compute_moment(int k) const {
  switch (kind_) {
    case Kind::kConstant:
      return std::pow(rho_max_, k);
    case Kind::kDiscrete: {
      double m = 0;
      for (auto& [v, p] : atoms_) m += p * std::pow(v, k);
      return m;
    }
    case Kind::kQuantileTable: {
      // Exact integral of q(u)^k over each linear segment.
      double m = 0;
      for (size_t i = 0; i + 1 < u_.size(); ++i) {
        double du = u_[i + 1] - u_[i];
        double a = q_[i], b = q_[i + 1];
        if (b - a < 1e-300 * (1 + b)) {
          m += du * std::pow(a, k);
        } else {
          m += du * (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
        }
      }
      return m;
    }
  }
  throw std::logic_error("bad law kind");
}

double RadiusLaw::moment(int k) const {
  if (k < 0) throw std::invalid_argument("RadiusLaw::moment: k must be >= 0");
  if (k <= kCachedMoments) return moments_[size_t(k)];
  return compute_moment(k);
}

double RadiusLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::kConstant:
      return rho_max_;
    case Kind::kDiscrete: {
      double u = uniform01(rng);
      size_t i = size_t(std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
      if (i >= atoms_.size()) i = atoms_.size() - 1;
      return atoms_[i].first;
    }
    case Kind::kQuantileTable: {
      double u = uniform01(rng);
      size_t i = size_t(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin());
      if (i == 0) return q_.front();
      if (i >= u_.size()) return q_.back();
      double t = (u - u_[i - 1]) / (u_[i] - u_[i - 1]);
      return q_[i - 1] + t * (q_[i] - q_[i - 1]);
    }
  }
  throw std::logic_error("bad law kind");
}

double RadiusLaw::constant_value() const {
  if (kind_ != Kind::kConstant)
    throw std::invalid_argument("RadiusLaw: constant radius required here");
  return rho_max_;
}

std::string RadiusLaw::spec_string() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::kConstant:
      os << "const:" << rho_max_;
      break;
    case Kind::kDiscrete: {
      os << "discrete:";
      bool first = true;
      for (auto& [v, p] : atoms_) {
        if (!first) os << ";";
        os << v << "=" << p;
        first = false;
      }
      break;
    }
    case Kind::kQuantileTable:
      os << "table:" << u_.size() << "pts;max=" << rho_max_ << ";tail=" << tail_mass_;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// ModelParams / ScalingProfile

ModelParams::ModelParams(ModelKind m, int d, double a, RadiusLaw law)
    : model(m), dim(d), alpha(a), radius(std::move(law)) {
  if (dim < 2) throw std::invalid_argument("ModelParams: d must be >= 2");
  if (dim > Vec::kMaxDim) throw std::invalid_argument("ModelParams: d too large");
  if (model == ModelKind::kInterlacements && dim < 3)
    throw std::invalid_argument("ModelParams: interlacements need d >= 3");
  if (!(alpha >= 0)) throw std::invalid_argument("ModelParams: alpha must be >= 0");
  if (model != ModelKind::kBoolean && !radius.is_constant())
    throw std::invalid_argument("ModelParams: this model takes a constant radius");
}

double ScalingProfile::min_r() const {
  return model == ModelKind::kInterlacements ? 2.0 : 1.0;
}

double ScalingProfile::phi(double r) const {
  if (!(r >= min_r())) throw std::invalid_argument("ScalingProfile: r below profile range");
  switch (model) {
    case ModelKind::kInterlacements:
      return dim == 3 ? r / std::log(r) : r;
    case ModelKind::kCylinders:
      return dim == 2 ? 1.0 : r;
    case ModelKind::kBoolean:
      return r;
  }
  throw std::logic_error("bad model");
}

double ScalingProfile::psi(double r) const {
  if (!(r >= min_r())) throw std::invalid_argument("ScalingProfile: r below profile range");
  if (model == ModelKind::kInterlacements && dim == 3) return 1.0 / std::log(r);
  return 1.0;
}

ScalingProfile scaling_profile(ModelKind model, int dim) {
  if (dim < 2) throw std::invalid_argument("scaling_profile: d must be >= 2");
  if (model == ModelKind::kInterlacements && dim < 3)
    throw std::invalid_argument("scaling_profile: interlacements need d >= 3");
  return ScalingProfile{model, dim};
}

// ---------------------------------------------------------------------------
// Closed forms

double boolean_mu_segment(int d, const RadiusLaw& law, double r) {
  if (d < 2) throw std::invalid_argument("boolean_mu_segment: d must be >= 2");
  if (r < 0) throw std::invalid_argument("boolean_mu_segment: r must be >= 0");
  double md = law.moment(d);
  double md1 = law.moment(d - 1);
  if (!std::isfinite(md) || !std::isfinite(md1))
    throw std::invalid_argument("boolean_mu_segment: infinite moment");
  return geom::unit_ball_volume(d) * md + geom::unit_ball_volume(d - 1) * md1 * r;
}

double boolean_f(const ModelParams& params, double r) {
  if (params.model != ModelKind::kBoolean)
    throw std::invalid_argument("boolean_f: ball-model parameters required");
  return std::exp(-params.alpha * boolean_mu_segment(params.dim, params.radius, r));
}

namespace {
double sin_pow(double x, int k) { return std::pow(std::sin(x), k); }

// Adaptive Simpson on [a,b].
double simpson(int k, double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = sin_pow(lm, k), frm = sin_pow(rm, k);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15;
  return simpson(k, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(k, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate_sin_power(int k) {
  double a = 0, b = kPi;
  double fa = sin_pow(a, k), fb = sin_pow(b, k), fm = sin_pow(0.5 * (a + b), k);
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson(k, a, b, fa, fm, fb, whole, 1e-13, 40);
}
}  // namespace

double mean_projected_sine(int d) {
  if (d < 2) throw std::invalid_argument("mean_projected_sine: d must be >= 2");
  return integrate_sin_power(d - 1) / integrate_sin_power(d - 2);
}

double cylinder_mu_capsule(int d, double rho, double r) {
  if (d < 2) throw std::invalid_argument("cylinder_mu_capsule: d must be >= 2");
  if (!(rho > 0)) throw std::invalid_argument("cylinder_mu_capsule: rho must be positive");
  if (r < 0) throw std::invalid_argument("cylinder_mu_capsule: r must be >= 0");
  // Projected cross-section is a (d-1)-dimensional capsule of radius rho and
  // length r sin(theta); averaging over rotations gives E[sin theta].
  return geom::unit_ball_volume(d - 1) * std::pow(rho, d - 1) +
         geom::unit_ball_volume(d - 2) * std::pow(rho, d - 2) * r * mean_projected_sine(d);
}

double cylinder_f(const ModelParams& params, double r) {
  if (params.model != ModelKind::kCylinders)
    throw std::invalid_argument("cylinder_f: cylinder-model parameters required");
  return std::exp(-params.alpha * cylinder_mu_capsule(params.dim, params.rho(), r));
}

double ball_capacity(int d, double s) {
  if (d < 3) throw std::invalid_argument("ball_capacity: d must be >= 3");
  if (!(s > 0)) throw std::invalid_argument("ball_capacity: s must be positive");
  return 2.0 * std::pow(kPi, d / 2.0) * std::pow(s, d - 2) / std::tgamma(d / 2.0 - 1.0);
}

ValueEstimate cylinder_mu_union_mc(const Vec& x, double r, double rho, int d, std::int64_t n,
                                   std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("cylinder_mu_union_mc: n must be positive");
  if (d < 2) throw std::invalid_argument("cylinder_mu_union_mc: d must be >= 2");
  if (x.dim() != d) throw std::invalid_argument("dimension mismatch");
  double xn = norm(x);
  if (xn > r * (1 + 1e-9)) throw std::invalid_argument("cylinder_mu_union_mc: |x| must be <= r");
  double cosw = xn > 0 ? std::clamp(x[0] / xn, -1.0, 1.0) : 1.0;
  double sinw = std::sqrt(std::max(0.0, 1.0 - cosw * cosw));

  const int pd = d - 1;  // projected dimension
  const std::int64_t kInner = 256;
  Rng rng = make_stream(seed, stream_tag::kMuUnion, 0);

  double sum = 0, sum2 = 0;
  Vec p(std::max(pd, 1));
  for (std::int64_t it = 0; it < n; ++it) {
    // Random orthonormal pair carries the rotated images of r*e1 and x.
    Vec e = uniform_on_sphere(d, 1.0, rng);
    Vec f(d);
    for (;;) {
      Vec g = gaussian_vec(d, rng);
      g -= dot(g, e) * e;
      double gn = norm(g);
      if (gn > 1e-9) {
        f = g * (1.0 / gn);
        break;
      }
    }
    Vec v1 = e * r;
    Vec v2 = e * (xn * cosw) + f * (xn * sinw);
    // Drop the first coordinate: remaining coordinates span the projection
    // hyperplane.
    Vec p1(std::max(pd, 1)), p2(std::max(pd, 1));
    for (int i = 0; i < pd; ++i) {
      p1[i] = v1[i + 1];
      p2[i] = v2[i + 1];
    }
    Vec zero(std::max(pd, 1));
    double lo[Vec::kMaxDim], hi[Vec::kMaxDim], box = 1;
    for (int i = 0; i < pd; ++i) {
      lo[i] = std::min({0.0, p1[i], p2[i]}) - rho;
      hi[i] = std::max({0.0, p1[i], p2[i]}) + rho;
      box *= hi[i] - lo[i];
    }
    std::int64_t in = 0;
    const double rr = rho * rho;
    for (std::int64_t k = 0; k < kInner; ++k) {
      for (int i = 0; i < pd; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
      bool hit = kernel::dist2_point_segment(p.data(), zero.data(), p1.data(), pd) <= rr ||
                 kernel::dist2_point_segment(p.data(), zero.data(), p2.data(), pd) <= rr;
      if (hit) ++in;
    }
    double est = box * double(in) / double(kInner);
    sum += est;
    sum2 += est * est;
  }
  ValueEstimate out;
  out.n = n;
  out.hits = n;
  out.value = sum / double(n);
  double var = std::max(0.0, sum2 / double(n) - out.value * out.value);
  out.se = std::sqrt(var / double(n));
  return out;
}

double ratio_statistic(double pvis, double f, double r, double delta, int d) {
  if (!(f > 0)) throw std::invalid_argument("ratio_statistic: f must be positive");
  return pvis / (std::pow(r / delta, d - 1) * f);
}

std::optional<double> analytic_f(const ModelParams& params, double r) {
  switch (params.model) {
    case ModelKind::kBoolean: return boolean_f(params, r);
    case ModelKind::kCylinders: return cylinder_f(params, r);
    case ModelKind::kInterlacements: return std::nullopt;
  }
  throw std::logic_error("bad model");
}

}  // namespace sightline::analytic
