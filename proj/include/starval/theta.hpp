#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "starval/geometry.hpp"

namespace starval {

/// Profile function theta on [0, domain_max]: either a closed form or a
/// piecewise-linear interpolant. Evaluation outside the domain is an error
/// (no extrapolation); every body fed to a theta valuation must satisfy
/// sup rho <= domain_max.
struct ThetaCurve {
  struct Power {
    double exponent;  // > 0
    double scale;     // scale * lambda^exponent
  };
  struct Sine {
    double frequency;
    double amplitude;  // amplitude * sin(frequency * lambda)
  };
  struct Polynomial {
    std::vector<double> coeffs;  // ascending powers
  };
  struct PiecewiseLinear {
    std::vector<double> xs;  // strictly increasing, xs.front()==0, xs.back()==domain_max
    std::vector<double> ys;
  };
  using Form = std::variant<Power, Sine, Polynomial, PiecewiseLinear>;

  double domain_max = 1.0;
  Form form;

  bool is_piecewise_linear() const {
    return std::holds_alternative<PiecewiseLinear>(form);
  }
};

inline ThetaCurve make_power_curve(double exponent, double domain_max,
                                   double scale = 1.0) {
  if (!(exponent > 0.0)) throw std::invalid_argument("power exponent must be > 0");
  if (!(domain_max > 0.0)) throw std::invalid_argument("domain_max must be > 0");
  return ThetaCurve{domain_max, ThetaCurve::Power{exponent, scale}};
}

inline ThetaCurve make_sine_curve(double frequency, double amplitude,
                                  double domain_max) {
  if (!(domain_max > 0.0)) throw std::invalid_argument("domain_max must be > 0");
  return ThetaCurve{domain_max, ThetaCurve::Sine{frequency, amplitude}};
}

inline ThetaCurve make_polynomial_curve(std::vector<double> coeffs,
                                        double domain_max) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs coefficients");
  if (!(domain_max > 0.0)) throw std::invalid_argument("domain_max must be > 0");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient not finite");
  return ThetaCurve{domain_max, ThetaCurve::Polynomial{std::move(coeffs)}};
}

inline ThetaCurve make_piecewise_linear_curve(std::vector<double> xs,
                                              std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("piecewise linear curve needs >= 2 nodes");
  if (xs.front() != 0.0)
    throw std::invalid_argument("piecewise linear curve must start at 0");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw std::invalid_argument("piecewise linear abscissae must increase");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw std::invalid_argument("piecewise linear node not finite");
  const double hi = xs.back();
  return ThetaCurve{hi, ThetaCurve::PiecewiseLinear{std::move(xs), std::move(ys)}};
}

namespace detail {

inline double eval_piecewise_linear(const std::vector<double>& xs,
                                    const std::vector<double>& ys, double x) {
  // exact at nodes, linear in between
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i == xs.size()) return ys.back();
  if (i == 0) return ys.front();
  --i;
  if (x == xs[i]) return ys[i];
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + t * (ys[i + 1] - ys[i]);
}

}  // namespace detail

inline double eval_theta(const ThetaCurve& curve, double lambda) {
  if (!(lambda >= 0.0) || lambda > curve.domain_max)
    throw std::domain_error("theta evaluated outside [0, domain_max]");
  if (const auto* p = std::get_if<ThetaCurve::Power>(&curve.form))
    return p->scale * std::pow(lambda, p->exponent);
  if (const auto* s = std::get_if<ThetaCurve::Sine>(&curve.form))
    return s->amplitude * std::sin(s->frequency * lambda);
  if (const auto* q = std::get_if<ThetaCurve::Polynomial>(&curve.form)) {
    double v = 0.0;
    for (std::size_t i = q->coeffs.size(); i-- > 0;) v = v * lambda + q->coeffs[i];
    return v;
  }
  const auto& pl = std::get<ThetaCurve::PiecewiseLinear>(curve.form);
  return detail::eval_piecewise_linear(pl.xs, pl.ys, lambda);
}

/// Rigorous Lipschitz bound of theta on its domain. +infinity for power
/// exponents below 1 (unbounded slope at 0).
inline double lipschitz_constant(const ThetaCurve& curve) {
  const double hi = curve.domain_max;
  if (const auto* p = std::get_if<ThetaCurve::Power>(&curve.form)) {
    if (p->exponent < 1.0) return std::numeric_limits<double>::infinity();
    return std::abs(p->scale) * p->exponent * std::pow(hi, p->exponent - 1.0);
  }
  if (const auto* s = std::get_if<ThetaCurve::Sine>(&curve.form))
    return std::abs(s->amplitude * s->frequency);
  if (const auto* q = std::get_if<ThetaCurve::Polynomial>(&curve.form)) {
    double bound = 0.0;
    for (std::size_t k = 1; k < q->coeffs.size(); ++k)
      bound += static_cast<double>(k) * std::abs(q->coeffs[k]) *
               std::pow(hi, static_cast<double>(k - 1));
    return bound;
  }
  const auto& pl = std::get<ThetaCurve::PiecewiseLinear>(curve.form);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pl.xs.size(); ++i)
    worst = std::max(worst,
                     std::abs((pl.ys[i + 1] - pl.ys[i]) / (pl.xs[i + 1] - pl.xs[i])));
  return worst;
}

/// sup of |theta| over [0, b] (b clamped to the domain). Exact for power,
/// sine and piecewise-linear forms; dense sampling with golden-section
/// refinement otherwise.
inline double sup_abs_theta(const ThetaCurve& curve, double b) {
  b = std::clamp(b, 0.0, curve.domain_max);
  if (const auto* p = std::get_if<ThetaCurve::Power>(&curve.form))
    return std::abs(p->scale) * std::pow(b, p->exponent);
  if (const auto* s = std::get_if<ThetaCurve::Sine>(&curve.form)) {
    const double arc = std::abs(s->frequency) * b;
    const double peak = arc >= 0.5 * kPi ? 1.0 : std::sin(arc);
    return std::abs(s->amplitude) * peak;
  }
  if (const auto* pl = std::get_if<ThetaCurve::PiecewiseLinear>(&curve.form)) {
    double m = std::abs(detail::eval_piecewise_linear(pl->xs, pl->ys, b));
    for (std::size_t i = 0; i < pl->xs.size() && pl->xs[i] <= b; ++i)
      m = std::max(m, std::abs(pl->ys[i]));
    return m;
  }
  // polynomial: dense sample plus local refinement of |theta|
  auto absf = [&](double x) { return std::abs(eval_theta(curve, x)); };
  const int res = 20001;
  double best = std::max(absf(0.0), absf(b));
  // b * (i/(res-1)) never rounds past b, so the domain check stays happy
  auto at = [&](int i) { return b * (static_cast<double>(i) / (res - 1)); };
  std::vector<double> vals(res);
  for (int i = 0; i < res; ++i) vals[static_cast<std::size_t>(i)] = absf(at(i));
  for (int i = 1; i + 1 < res; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    best = std::max(best, vals[u]);
    if (vals[u] >= vals[u - 1] && vals[u] >= vals[u + 1]) {
      double a = at(i - 1), c = at(i + 1);
      const double invphi = 0.6180339887498949;
      double x1 = c - invphi * (c - a), x2 = a + invphi * (c - a);
      double f1 = absf(x1), f2 = absf(x2);
      for (int it = 0; it < 70; ++it) {
        if (f1 >= f2) {
          c = x2; x2 = x1; f2 = f1;
          x1 = c - invphi * (c - a); f1 = absf(x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + invphi * (c - a); f2 = absf(x2);
        }
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

namespace detail {

// Support points (strictly increasing xs, nondecreasing ys) of a running max.
struct MaxEnvelope {
  std::vector<double> xs;
  std::vector<double> ys;
};

inline void push_envelope_node(MaxEnvelope& env, double x, double y, double min_gap) {
  if (!env.xs.empty()) {
    if (x <= env.xs.back() + min_gap) {
      // near-coincident nodes collapse; keep the later abscissa so the
      // envelope still ends exactly at the domain end
      env.xs.back() = std::max(env.xs.back(), x);
      env.ys.back() = std::max(env.ys.back(), y);
      return;
    }
    y = std::max(y, env.ys.back());  // envelope never decreases
    const std::size_t n = env.xs.size();
    if (n >= 2 && y == env.ys[n - 1] && env.ys[n - 1] == env.ys[n - 2]) {
      env.xs[n - 1] = x;  // extend an exact plateau instead of stacking nodes
      return;
    }
  }
  env.xs.push_back(x);
  env.ys.push_back(y);
}

/// Exact running max of a piecewise-linear function. Linear pieces attain
/// extrema at endpoints, so a prefix scan with plateau-crossing insertion is
/// exact.
inline MaxEnvelope running_max_of_pl(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
  const double min_gap = xs.back() * 1e-15;
  MaxEnvelope env;
  env.xs.push_back(xs.front());
  env.ys.push_back(ys.front());
  double m = ys.front();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i], y0 = ys[i], x1 = xs[i + 1], y1 = ys[i + 1];
    if (y1 <= m) {
      push_envelope_node(env, x1, m, min_gap);
      continue;
    }
    // segment climbs above the prior record; hold m until the crossing
    if (y0 < m) {
      const double xc = x0 + (m - y0) / (y1 - y0) * (x1 - x0);
      push_envelope_node(env, xc, m, min_gap);
    }
    push_envelope_node(env, x1, y1, min_gap);
    m = y1;
  }
  return env;
}

// Envelope plus the augmented abscissae it was built from. The sample list
// refines every envelope segment, which is what decompose_theta needs to put
// theta_minus on a grid where theta_plus is exactly linear.
struct EnvelopeBuild {
  MaxEnvelope env;
  std::vector<double> sample_xs;
};

/// Running max of a callable on [0, hi]: dense sampling, golden-section
/// refinement of interior sample maxima (plateau heights), then one bisection
/// pass to place plateau-to-rise breakpoints.
template <typename F>
EnvelopeBuild running_max_of_callable(F&& f, double hi, std::int64_t resolution) {
  const std::size_t res = static_cast<std::size_t>(resolution);
  std::vector<double> sx(res), sy(res);
  for (std::size_t i = 0; i < res; ++i) {
    sx[i] = (i + 1 == res) ? hi : hi * static_cast<double>(i) / static_cast<double>(res - 1);
    sy[i] = f(sx[i]);
  }

  std::vector<std::pair<double, double>> pts;
  pts.reserve(res + 16);
  for (std::size_t i = 0; i < res; ++i) pts.emplace_back(sx[i], sy[i]);

  const double invphi = 0.6180339887498949;
  for (std::size_t i = 1; i + 1 < res; ++i) {
    if (sy[i] >= sy[i - 1] && sy[i] >= sy[i + 1] &&
        (sy[i] > sy[i - 1] || sy[i] > sy[i + 1])) {
      double a = sx[i - 1], b = sx[i + 1];
      double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < 80; ++it) {
        if (f1 >= f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - invphi * (b - a); f1 = f(x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + invphi * (b - a); f2 = f(x2);
        }
      }
      const double xm = 0.5 * (a + b);
      pts.emplace_back(xm, f(xm));
    }
  }
  std::sort(pts.begin(), pts.end());

  // prefix max over the augmented samples
  std::vector<double> px(pts.size()), py(pts.size()), mx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    px[i] = pts[i].first;
    py[i] = pts[i].second;
    mx[i] = i ? std::max(mx[i - 1], py[i]) : py[i];
  }

  const double min_gap = hi * 1e-15;
  EnvelopeBuild out;
  MaxEnvelope& env = out.env;
  push_envelope_node(env, px[0], mx[0], min_gap);
  out.sample_xs.push_back(px[0]);
  for (std::size_t i = 0; i + 1 < px.size(); ++i) {
    if (mx[i + 1] > mx[i] && py[i] < mx[i]) {
      // envelope leaves a plateau inside (px[i], px[i+1]); bisect f == mx[i]
      const double c = mx[i];
      double lo = px[i], hicx = px[i + 1];
      for (int it = 0; it < 70; ++it) {
        const double mid = 0.5 * (lo + hicx);
        (f(mid) <= c ? lo : hicx) = mid;
      }
      const double xc = 0.5 * (lo + hicx);
      push_envelope_node(env, xc, c, min_gap);
      out.sample_xs.push_back(xc);
    }
    push_envelope_node(env, px[i + 1], mx[i + 1], min_gap);
    out.sample_xs.push_back(px[i + 1]);
  }
  return out;
}

template <typename F>
EnvelopeBuild running_max_build(const ThetaCurve& curve, F&& shifted_eval,
                                std::int64_t resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (const auto* pl = std::get_if<ThetaCurve::PiecewiseLinear>(&curve.form)) {
    std::vector<double> ys(pl->ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = shifted_eval(pl->xs[i]);
    EnvelopeBuild out;
    out.env = running_max_of_pl(pl->xs, ys);
    out.sample_xs = pl->xs;
    return out;
  }
  return running_max_of_callable(shifted_eval, curve.domain_max, resolution);
}

}  // namespace detail

/// Running maximum M(lambda) = max of theta over [0, lambda], returned as a
/// piecewise-linear curve on the same domain. Exact for piecewise-linear
/// input; for closed forms sampled at `resolution` points with local
/// refinement of peaks and breakpoints.
inline ThetaCurve running_max(const ThetaCurve& curve, std::int64_t resolution) {
  auto build = detail::running_max_build(
      curve, [&](double x) { return eval_theta(curve, x); }, resolution);
  return make_piecewise_linear_curve(std::move(build.env.xs),
                                     std::move(build.env.ys));
}

/// Jordan decomposition of a profile: theta = theta_plus - theta_minus + offset
/// with offset = theta(0), theta_plus the running max of theta - offset
/// (nonnegative, nondecreasing, 0 at 0) and theta_minus = theta_plus - theta
/// + offset (nonnegative, 0 at 0).
struct ThetaDecomposition {
  ThetaCurve theta_plus;
  ThetaCurve theta_minus;
  double offset;
};

inline ThetaDecomposition decompose_theta(const ThetaCurve& curve,
                                          std::int64_t resolution) {
  const double offset = eval_theta(curve, 0.0);
  auto shifted = [&](double x) { return eval_theta(curve, x) - offset; };
  auto build = detail::running_max_build(curve, shifted, resolution);
  const auto& env = build.env;

  // theta_minus lives on abscissae that refine every theta_plus segment, so
  // theta_plus - theta_minus interpolates theta - offset itself between nodes.
  std::vector<double> minus_xs;
  minus_xs.reserve(build.sample_xs.size() + env.xs.size());
  std::merge(build.sample_xs.begin(), build.sample_xs.end(), env.xs.begin(),
             env.xs.end(), std::back_inserter(minus_xs));
  minus_xs.erase(std::unique(minus_xs.begin(), minus_xs.end()), minus_xs.end());

  std::vector<double> minus_ys(minus_xs.size());
  for (std::size_t i = 0; i < minus_xs.size(); ++i) {
    const double plus = detail::eval_piecewise_linear(env.xs, env.ys, minus_xs[i]);
    minus_ys[i] = std::max(0.0, plus - shifted(minus_xs[i]));
  }

  ThetaDecomposition out{
      make_piecewise_linear_curve(env.xs, env.ys),
      make_piecewise_linear_curve(std::move(minus_xs), std::move(minus_ys)),
      offset};
  // the running max of a function vanishing at 0 starts at exactly 0
  std::get<ThetaCurve::PiecewiseLinear>(out.theta_plus.form).ys.front() = 0.0;
  std::get<ThetaCurve::PiecewiseLinear>(out.theta_minus.form).ys.front() = 0.0;
  return out;
}

}  // namespace starval
