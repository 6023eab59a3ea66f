#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace sightline {

/// Dense point/vector in R^d with inline storage (no heap). Dimensions up to
/// kMaxDim are supported; that covers every configuration this engine runs.
class Vec {
 public:
  static constexpr int kMaxDim = 8;

  Vec() = default;
  explicit Vec(int dim) : dim_(checked(dim)) { v_.fill(0.0); }
  Vec(std::initializer_list<double> xs) : dim_(checked(int(xs.size()))) {
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }

  static Vec of(std::span<const double> xs) {
    Vec v(int(xs.size()));
    for (int i = 0; i < v.dim_; ++i) v.v_[i] = xs[i];
    return v;
  }

  /// Unit basis vector scaled by `scale` (axis is 0-based).
  static Vec axis(int dim, int axis, double scale = 1.0) {
    Vec v(dim);
    if (axis < 0 || axis >= dim) throw std::invalid_argument("Vec::axis: bad axis");
    v.v_[axis] = scale;
    return v;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return v_[i]; }
  double& operator[](int i) { return v_[i]; }
  const double* data() const { return v_.data(); }
  double* data() { return v_.data(); }
  std::span<const double> span() const { return {v_.data(), size_t(dim_)}; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) v_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.v_[i] != b.v_[i]) return false;
    return true;
  }

 private:
  static int checked(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    return dim;
  }

  std::array<double, kMaxDim> v_{};
  int dim_ = 0;
};

inline void require_same_dim(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

// Low-level kernels on raw coordinate arrays. These carry the hot loops of the
// scene queries; the Vec-based API wraps them.
namespace kernel {

inline double dot(const double* a, const double* b, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

inline double dist2(const double* a, const double* b, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) {
    double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

/// Squared distance from point p to the closed segment [a, b].
inline double dist2_point_segment(const double* p, const double* a, const double* b, int d) {
  double ab2 = 0, apab = 0;
  for (int i = 0; i < d; ++i) {
    double e = b[i] - a[i];
    ab2 += e * e;
    apab += (p[i] - a[i]) * e;
  }
  double t = 0.0;
  if (ab2 > 0) {
    t = apab / ab2;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
  }
  double s = 0;
  for (int i = 0; i < d; ++i) {
    double c = a[i] + t * (b[i] - a[i]) - p[i];
    s += c * c;
  }
  return s;
}

/// Squared distance between closed segments [p1,q1] and [p2,q2]
/// (closed-form quadratic minimization with clamping).
inline double dist2_segment_segment(const double* p1, const double* q1, const double* p2,
                                    const double* q2, int d) {
  double a = 0, b = 0, c = 0, e = 0, f = 0;
  for (int i = 0; i < d; ++i) {
    double d1 = q1[i] - p1[i];
    double d2 = q2[i] - p2[i];
    double r = p1[i] - p2[i];
    a += d1 * d1;
    b += d1 * d2;
    c += d1 * r;
    e += d2 * d2;
    f += d2 * r;
  }
  double s, t;
  if (a <= 0 && e <= 0) {
    s = t = 0;
  } else if (a <= 0) {
    s = 0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else if (e <= 0) {
    t = 0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else {
    double denom = a * e - b * b;
    s = denom > 0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    t = (b * s + f) / e;
    if (t < 0) {
      t = 0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1) {
      t = 1;
      s = std::clamp((b - c) / a, 0.0, 1.0);
    }
  }
  double dd = 0;
  for (int i = 0; i < d; ++i) {
    double u = (p1[i] + s * (q1[i] - p1[i])) - (p2[i] + t * (q2[i] - p2[i]));
    dd += u * u;
  }
  return dd;
}

/// Squared distance from the closed segment [a,b] to the full line
/// {q + u*s : s in R}, `u` a unit vector.
inline double dist2_segment_line(const double* a, const double* b, const double* q,
                                 const double* u, int d) {
  // g(t) = |w0 + t*ab|^2 - ((w0 + t*ab).u)^2, minimized over t in [0,1].
  double ab2 = 0, abu = 0, w0ab = 0, w02 = 0, w0u = 0;
  for (int i = 0; i < d; ++i) {
    double e = b[i] - a[i];
    double w = a[i] - q[i];
    ab2 += e * e;
    abu += e * u[i];
    w0ab += w * e;
    w02 += w * w;
    w0u += w * u[i];
  }
  double A = ab2 - abu * abu;
  double B = 2 * (w0ab - w0u * abu);
  double C = w02 - w0u * w0u;
  double t = 0.0;
  if (A > 0) t = std::clamp(-B / (2 * A), 0.0, 1.0);
  double g = (A * t + B) * t + C;
  return g > 0 ? g : 0.0;
}

}  // namespace kernel
}  // namespace sightline
