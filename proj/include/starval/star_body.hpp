#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "starval/errors.hpp"
#include "starval/geometry.hpp"
#include "starval/rng.hpp"
#include "starval/sphere_grid.hpp"

namespace starval {

/// Radial function of a star body, sampled on a grid: values[i] is the
/// boundary distance along node i. Nonnegative and finite; the all-zeros
/// function is the degenerate body {0} and is legal everywhere.
class RadialFunction {
 public:
  RadialFunction(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("radial function needs a grid");
    if (values_.size() != grid_->node_count())
      throw std::invalid_argument("radial function length does not match grid");
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("radial value not finite");
      if (v < 0.0) throw std::invalid_argument("radial value is negative");
    }
  }

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// The body {0} on a grid.
inline RadialFunction origin_body(GridPtr grid) {
  std::vector<double> zeros(grid->node_count(), 0.0);
  return RadialFunction(std::move(grid), std::move(zeros));
}

inline void require_same_grid(const RadialFunction& f, const RadialFunction& g) {
  if (!same_grid(f.grid(), g.grid()))
    throw std::invalid_argument("radial functions live on different grids");
}

/// Pointwise maximum: the radial function of the union of the two bodies.
inline RadialFunction radial_union(const RadialFunction& f, const RadialFunction& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(f[i], g[i]);
  return RadialFunction(f.grid(), std::move(v));
}

/// Pointwise minimum: the radial function of the intersection.
inline RadialFunction radial_intersection(const RadialFunction& f,
                                          const RadialFunction& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(f[i], g[i]);
  return RadialFunction(f.grid(), std::move(v));
}

/// Pointwise sum: the radial sum of the two bodies.
inline RadialFunction radial_sum(const RadialFunction& f, const RadialFunction& g) {
  require_same_grid(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + g[i];
  return RadialFunction(f.grid(), std::move(v));
}

/// Sup-norm distance between sampled radial functions (the radial metric on
/// the grid).
inline double radial_metric(const RadialFunction& f, const RadialFunction& g) {
  require_same_grid(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

/// Random body with node values i.i.d. uniform in [0, sup]; the rough-body
/// model used by the seeded checks.
inline RadialFunction random_radial_function(GridPtr grid, double sup,
                                             SplitMix64& rng) {
  if (!(sup >= 0.0)) throw std::invalid_argument("random body needs sup >= 0");
  std::vector<double> v(grid->node_count());
  for (double& x : v) x = rng.uniform(0.0, sup);
  return RadialFunction(std::move(grid), std::move(v));
}

// ---------------------------------------------------------------------------
// Closed-form body generators
// ---------------------------------------------------------------------------

/// One angular harmonic of a planar blob: cos_coef*cos(k*phi) + sin_coef*sin(k*phi).
struct TrigTerm2 {
  int harmonic;
  double cos_coef;
  double sin_coef;
};

/// One product harmonic of a spherical blob:
/// coef * cos(polar_mult * theta) * h(azimuth_mult, phi), where h(m, phi) is
/// cos(m*phi) for m >= 0 and sin(|m|*phi) for m < 0.
struct TrigTerm3 {
  int polar_mult;
  int azimuth_mult;
  double coef;
};

/// Closed-form radial functions with an attached orthogonal rotation. The
/// generator evaluates its base form at R^-1 t, so rotation is exact and never
/// interpolates sampled data.
class BodyGenerator {
 public:
  struct Origin {};
  struct Ball {
    double radius;
  };
  struct Ellipsoid {
    std::vector<double> semi_axes;
  };
  struct TrigBlob2 {
    double constant;
    std::vector<TrigTerm2> terms;
    double floor;
  };
  struct TrigBlob3 {
    double constant;
    std::vector<TrigTerm3> terms;
    double floor;
  };
  using Form = std::variant<Origin, Ball, Ellipsoid, TrigBlob2, TrigBlob3>;

  BodyGenerator(int dim, Form form)
      : dim_(dim), form_(std::move(form)), rotation_() {
    if (dim_ < 2) throw std::invalid_argument("generator dim must be >= 2");
  }

  int dim() const { return dim_; }
  const Form& form() const { return form_; }

  bool has_rotation() const { return !rotation_.empty(); }
  const std::vector<double>& rotation() const { return rotation_; }

  void set_rotation(std::vector<double> r) {
    require_orthogonal(r, dim_);
    rotation_ = std::move(r);
  }

  /// Radial value along unit direction t.
  double operator()(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != dim_)
      throw std::invalid_argument("direction dim mismatch");
    if (rotation_.empty()) return eval_base(t);
    std::vector<double> u(t.size());
    apply_transposed(rotation_, t, u);
    return eval_base(u);
  }

 private:
  double eval_base(std::span<const double> u) const {
    if (std::holds_alternative<Origin>(form_)) return 0.0;
    if (const auto* b = std::get_if<Ball>(&form_)) return b->radius;
    if (const auto* e = std::get_if<Ellipsoid>(&form_)) {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double q = u[i] / e->semi_axes[i];
        s += q * q;
      }
      return 1.0 / std::sqrt(s);
    }
    if (const auto* t2 = std::get_if<TrigBlob2>(&form_)) {
      const double phi = std::atan2(u[1], u[0]);
      double v = t2->constant;
      for (const TrigTerm2& term : t2->terms)
        v += term.cos_coef * std::cos(term.harmonic * phi) +
             term.sin_coef * std::sin(term.harmonic * phi);
      return std::max(v, t2->floor);
    }
    const auto& t3 = std::get<TrigBlob3>(form_);
    const double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
    const double phi = std::atan2(u[1], u[0]);
    double v = t3.constant;
    for (const TrigTerm3& term : t3.terms) {
      const double azim = term.azimuth_mult >= 0
                              ? std::cos(term.azimuth_mult * phi)
                              : std::sin(-term.azimuth_mult * phi);
      v += term.coef * std::cos(term.polar_mult * theta) * azim;
    }
    return std::max(v, t3.floor);
  }

  int dim_;
  Form form_;
  std::vector<double> rotation_;  // empty means identity
};

inline BodyGenerator make_origin(int dim) {
  return BodyGenerator(dim, BodyGenerator::Origin{});
}

inline BodyGenerator make_ball(int dim, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
  return BodyGenerator(dim, BodyGenerator::Ball{radius});
}

inline BodyGenerator make_ellipsoid(std::vector<double> semi_axes) {
  if (semi_axes.size() < 2) throw std::invalid_argument("ellipsoid needs >= 2 axes");
  for (double a : semi_axes)
    if (!(a > 0.0)) throw std::invalid_argument("ellipsoid axes must be > 0");
  const int dim = static_cast<int>(semi_axes.size());
  return BodyGenerator(dim, BodyGenerator::Ellipsoid{std::move(semi_axes)});
}

/// Truncated Fourier series in the polar angle, clamped below at `floor`.
inline BodyGenerator make_trigblob2(double constant, std::vector<TrigTerm2> terms,
                                    double floor = 0.0) {
  if (!(floor >= 0.0)) throw std::invalid_argument("trigblob floor must be >= 0");
  return BodyGenerator(2, BodyGenerator::TrigBlob2{constant, std::move(terms), floor});
}

/// Finite sum of polar/azimuthal product harmonics, clamped below at `floor`.
inline BodyGenerator make_trigblob3(double constant, std::vector<TrigTerm3> terms,
                                    double floor = 0.0) {
  if (!(floor >= 0.0)) throw std::invalid_argument("trigblob floor must be >= 0");
  return BodyGenerator(3, BodyGenerator::TrigBlob3{constant, std::move(terms), floor});
}

/// Random smooth planar blob with values guaranteed inside [0, sup]: constant
/// sup/2 plus `harmonics` random terms whose amplitudes split the remaining
/// sup/2 budget.
inline BodyGenerator random_trigblob2(double sup, int harmonics, SplitMix64& rng) {
  if (!(sup >= 0.0)) throw std::invalid_argument("random blob needs sup >= 0");
  if (harmonics < 1) throw std::invalid_argument("random blob needs harmonics >= 1");
  std::vector<TrigTerm2> terms;
  terms.reserve(static_cast<std::size_t>(harmonics));
  double budget = 0.5 * sup;
  for (int k = 1; k <= harmonics; ++k) {
    const double amp = budget * rng.uniform(0.0, k == harmonics ? 1.0 : 0.8);
    budget -= amp;
    const double mix = rng.uniform(0.0, 1.0);
    terms.push_back({k, amp * mix, amp * (1.0 - mix)});
  }
  return make_trigblob2(0.5 * sup, std::move(terms), 0.0);
}

/// Exact closed-form sampling of the generator on the grid.
inline RadialFunction sample(const BodyGenerator& gen, GridPtr grid) {
  if (gen.dim() != grid->dim)
    throw std::invalid_argument("generator/grid dimension mismatch");
  std::vector<double> v(grid->node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = gen(grid->node(i));
  return RadialFunction(std::move(grid), std::move(v));
}

/// Composes a new rotation on the left: sampling the result at t equals
/// sampling `gen` at R^-1 t.
inline BodyGenerator rotate(const BodyGenerator& gen, const std::vector<double>& r) {
  require_orthogonal(r, gen.dim());
  BodyGenerator out = gen;
  if (gen.has_rotation())
    out.set_rotation(matmul(r, gen.rotation(), gen.dim()));
  else
    out.set_rotation(r);
  return out;
}

/// Exact rotation of a sampled function on a circle grid: cyclic index shift
/// by k steps, no interpolation. Only circle grids carry this symmetry.
inline RadialFunction rotate_sampled(const RadialFunction& f, std::int64_t steps) {
  if (f.grid()->kind != GridKind::circle)
    throw UnsupportedOperationError("index rotation requires a circle grid");
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  std::vector<double> v(f.size());
  for (std::int64_t j = 0; j < n; ++j) {
    std::int64_t src = (j - steps) % n;
    if (src < 0) src += n;
    v[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(src)];
  }
  return RadialFunction(f.grid(), std::move(v));
}

/// Recovers the radial function of a star set given only a membership
/// predicate, by bisecting along each grid ray to width <= tol.
inline RadialFunction radial_from_membership(
    const std::function<bool(std::span<const double>)>& inside, GridPtr grid,
    double rmax, double tol) {
  if (!(rmax > 0.0)) throw std::invalid_argument("rmax must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  const int dim = grid->dim;
  std::vector<double> point(static_cast<std::size_t>(dim), 0.0);
  if (!inside(point))
    throw NotStarShapedError("membership oracle rejects the origin");
  std::vector<double> v(grid->node_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto t = grid->node(i);
    auto at = [&](double c) {
      for (int j = 0; j < dim; ++j) point[static_cast<std::size_t>(j)] = c * t[j];
      return inside(point);
    };
    if (at(rmax))
      throw UnboundedBodyError("membership oracle still inside at rmax along node " +
                               std::to_string(i));
    double lo = 0.0, hi = rmax;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) ? lo : hi) = mid;
    }
    v[i] = 0.5 * (lo + hi);
  }
  return RadialFunction(std::move(grid), std::move(v));
}

}  // namespace starval
