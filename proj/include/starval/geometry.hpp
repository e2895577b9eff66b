#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace starval {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Compensated (Kahan) accumulator. Keeps quadrature sums accurate to a few
/// ulps independently of the number of terms.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Chordal (ambient Euclidean) distance between two points of S^{n-1}.
inline double chord_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Angle in [0, pi] between two unit vectors.
inline double angle_between(std::span<const double> a, std::span<const double> b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

/// Chord length subtended by an angle psi on the unit sphere.
inline double chord_of_angle(double psi) { return 2.0 * std::sin(0.5 * psi); }

// Square matrices are flat row-major vectors of size dim*dim.

inline std::vector<double> identity_matrix(int dim) {
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return m;
}

inline std::vector<double> matmul(const std::vector<double>& a,
                                  const std::vector<double>& b, int dim) {
  std::vector<double> c(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * dim + k];
      for (int j = 0; j < dim; ++j)
        c[static_cast<std::size_t>(i) * dim + j] +=
            aik * b[static_cast<std::size_t>(k) * dim + j];
    }
  return c;
}

/// y = M^T x. For an orthogonal M this applies the inverse rotation.
inline void apply_transposed(const std::vector<double>& m, std::span<const double> x,
                             std::span<double> y) {
  const int dim = static_cast<int>(x.size());
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += m[static_cast<std::size_t>(j) * dim + i] * x[j];
    y[i] = s;
  }
}

/// Max-norm departure of M^T M from the identity.
inline double orthogonality_defect(const std::vector<double>& m, int dim) {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k)
        s += m[static_cast<std::size_t>(k) * dim + i] *
             m[static_cast<std::size_t>(k) * dim + j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

inline void require_orthogonal(const std::vector<double>& m, int dim,
                               double tol = 1e-10) {
  if (m.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("rotation matrix has wrong size");
  for (double v : m)
    if (!std::isfinite(v)) throw std::invalid_argument("rotation matrix not finite");
  if (orthogonality_defect(m, dim) > tol)
    throw std::invalid_argument("matrix is not orthogonal within 1e-10");
}

/// Planar rotation by `angle` in R^2.
inline std::vector<double> rotation2d(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

}  // namespace starval
