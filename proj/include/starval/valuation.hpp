#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "starval/geometry.hpp"
#include "starval/rng.hpp"
#include "starval/sphere_grid.hpp"
#include "starval/star_body.hpp"
#include "starval/theta.hpp"

namespace starval {

/// A valuation on sampled star bodies: either the quadrature of a profile
/// theta composed with the radial function, or an opaque evaluator with a
/// declared domain bound. Blackbox evaluators must be deterministic.
class ValuationSpec {
 public:
  struct ThetaValuation {
    ThetaCurve curve;
  };
  struct Blackbox {
    std::function<double(const RadialFunction&)> fn;
    double lambda_max;
    std::string name;
  };

  static ValuationSpec theta(ThetaCurve curve) {
    return ValuationSpec(ThetaValuation{std::move(curve)});
  }

  static ValuationSpec blackbox(std::function<double(const RadialFunction&)> fn,
                                double lambda_max, std::string name = "blackbox") {
    if (!fn) throw std::invalid_argument("blackbox valuation needs a function");
    if (!(lambda_max > 0.0))
      throw std::invalid_argument("blackbox lambda_max must be > 0");
    return ValuationSpec(Blackbox{std::move(fn), lambda_max, std::move(name)});
  }

  bool is_theta() const { return std::holds_alternative<ThetaValuation>(impl_); }

  const ThetaCurve& curve() const {
    return std::get<ThetaValuation>(impl_).curve;
  }

  const Blackbox& blackbox_impl() const { return std::get<Blackbox>(impl_); }

  double lambda_max() const {
    if (is_theta()) return curve().domain_max;
    return std::get<Blackbox>(impl_).lambda_max;
  }

 private:
  using Impl = std::variant<ThetaValuation, Blackbox>;
  explicit ValuationSpec(Impl impl) : impl_(std::move(impl)) {}
  Impl impl_;
};

inline ValuationSpec make_theta_valuation(ThetaCurve curve) {
  return ValuationSpec::theta(std::move(curve));
}

inline ValuationSpec make_blackbox_valuation(
    std::function<double(const RadialFunction&)> fn, double lambda_max,
    std::string name = "blackbox") {
  return ValuationSpec::blackbox(std::move(fn), lambda_max, std::move(name));
}

/// V(K). Theta specs integrate theta against the radial samples with the
/// grid's quadrature; blackboxes delegate. Bodies above lambda_max are a
/// domain error.
inline double evaluate(const ValuationSpec& spec, const RadialFunction& body) {
  if (body.sup_norm() > spec.lambda_max())
    throw std::domain_error("body exceeds the valuation's lambda_max");
  if (!spec.is_theta()) return spec.blackbox_impl().fn(body);
  const ThetaCurve& curve = spec.curve();
  const SphereGrid& grid = *body.grid();
  KahanSum acc;
  for (std::size_t i = 0; i < body.size(); ++i)
    acc.add(grid.weights[i] * eval_theta(curve, body[i]));
  return acc.value();
}

/// V(K u L) + V(K n L) - V(K) - V(L); zero (to rounding) exactly when the
/// spec is a valuation on the sampled lattice.
inline double valuation_residual(const ValuationSpec& spec, const RadialFunction& k,
                                 const RadialFunction& l) {
  require_same_grid(k, l);
  return evaluate(spec, radial_union(k, l)) + evaluate(spec, radial_intersection(k, l)) -
         evaluate(spec, k) - evaluate(spec, l);
}

/// Recovers the profile lambda -> V(lambda * sphere) through sampled balls.
/// For theta specs this reproduces theta exactly up to rounding (constant
/// integrand against a probability measure).
inline ThetaCurve extract_theta(const ValuationSpec& spec, const GridPtr& grid,
                                const std::vector<double>& lambda_samples) {
  if (lambda_samples.size() < 2)
    throw std::invalid_argument("extract_theta needs >= 2 samples");
  if (lambda_samples.front() != 0.0)
    throw std::invalid_argument("lambda samples must start at 0");
  for (std::size_t i = 0; i + 1 < lambda_samples.size(); ++i)
    if (!(lambda_samples[i] < lambda_samples[i + 1]))
      throw std::invalid_argument("lambda samples must be strictly increasing");
  if (lambda_samples.back() > spec.lambda_max())
    throw std::domain_error("lambda samples exceed lambda_max");
  std::vector<double> ordinates(lambda_samples.size());
  for (std::size_t i = 0; i < lambda_samples.size(); ++i) {
    std::vector<double> values(grid->node_count(), lambda_samples[i]);
    ordinates[i] = evaluate(spec, RadialFunction(grid, std::move(values)));
  }
  return make_piecewise_linear_curve(lambda_samples, std::move(ordinates));
}

/// Max over the supplied rotations of |V(sample(gen)) - V(sample(rotate(gen,R)))|.
/// Rotations act on the generator, so sampling stays exact.
inline double check_rotational_invariance(const ValuationSpec& spec,
                                          const BodyGenerator& gen,
                                          const std::vector<std::vector<double>>& rotations,
                                          const GridPtr& grid) {
  const double base = evaluate(spec, sample(gen, grid));
  double worst = 0.0;
  for (const auto& r : rotations) {
    const double rotated = evaluate(spec, sample(rotate(gen, r), grid));
    worst = std::max(worst, std::abs(rotated - base));
  }
  return worst;
}

/// Body model for the seeded boundedness probes: rough bodies (node values
/// i.i.d. uniform in [0, lambda], the default; they stress sup-type bounds
/// hardest) or smooth random blobs sampled from closed forms.
enum class RandomBodyModel { rough, smooth };

struct BoundednessReport {
  double lambda = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double empirical_max = 0.0;            // max |V| over the random bodies
  std::optional<double> analytic_bound;  // sup |theta| on [0, lambda], theta specs
};

/// Empirical version of "bounded on bounded sets": max |V| over seeded random
/// bodies inside the lambda-ball. For theta specs the report carries the
/// analytic bound sup |theta| as well; for blackboxes the empirical figure is
/// all there is.
inline BoundednessReport check_bounded_on_bounded(
    const ValuationSpec& spec, const GridPtr& grid, double lambda,
    std::uint64_t trials, std::uint64_t seed,
    RandomBodyModel model = RandomBodyModel::rough) {
  if (!(lambda >= 0.0) || lambda > spec.lambda_max())
    throw std::domain_error("lambda outside [0, lambda_max]");
  BoundednessReport report;
  report.lambda = lambda;
  report.trials = trials;
  report.seed = seed;
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(split_seed(seed, t));
    const RadialFunction body =
        model == RandomBodyModel::rough
            ? random_radial_function(grid, lambda, rng)
            : sample(random_trigblob2(lambda, 4, rng), grid);
    report.empirical_max = std::max(report.empirical_max, std::abs(evaluate(spec, body)));
  }
  if (spec.is_theta()) report.analytic_bound = sup_abs_theta(spec.curve(), lambda);
  return report;
}

struct ContinuityRow {
  double delta;
  double observed_sup;  // max |V(K) - V(K')| over probes with metric <= delta
};

/// Empirical modulus of continuity around `body`: for each delta, the max
/// deviation of V over seeded perturbations of sup-norm at most delta
/// (clamped at 0). This is a report, not a decision procedure: finitely many
/// probes cannot certify continuity.
inline std::vector<ContinuityRow> check_continuity(const ValuationSpec& spec,
                                                   const RadialFunction& body,
                                                   const std::vector<double>& deltas,
                                                   std::uint64_t probes,
                                                   std::uint64_t seed) {
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
    if (deltas[i] < deltas[i + 1])
      throw std::invalid_argument("deltas must be non-increasing");
  double max_delta = 0.0;
  for (double d : deltas) {
    if (!(d >= 0.0)) throw std::invalid_argument("deltas must be >= 0");
    max_delta = std::max(max_delta, d);
  }
  if (body.sup_norm() + max_delta > spec.lambda_max())
    throw std::domain_error("body plus max delta exceeds lambda_max");
  const double base = evaluate(spec, body);
  std::vector<ContinuityRow> table;
  table.reserve(deltas.size());
  std::vector<double> perturbed(body.size());
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    double sup = 0.0;
    for (std::uint64_t p = 0; p < probes; ++p) {
      SplitMix64 rng(split_seed(seed, di * probes + p));
      for (std::size_t i = 0; i < perturbed.size(); ++i)
        perturbed[i] = std::max(0.0, body[i] + rng.uniform(-delta, delta));
      const double v = evaluate(spec, RadialFunction(body.grid(), perturbed));
      sup = std::max(sup, std::abs(v - base));
    }
    table.push_back({delta, sup});
  }
  return table;
}

}  // namespace starval
