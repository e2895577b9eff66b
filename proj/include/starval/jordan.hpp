#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "starval/errors.hpp"
#include "starval/rng.hpp"
#include "starval/star_body.hpp"
#include "starval/theta.hpp"
#include "starval/valuation.hpp"

namespace starval {

/// Sampling density used when a closed-form profile has to be decomposed and
/// no resolution is given explicitly. Fine enough that interpolation error on
/// smooth profiles sits well below 1e-9.
inline constexpr std::int64_t kDefaultDecomposeResolution = (1 << 20) + 1;

enum class SearchMode { exhaustive, greedy };

inline const char* search_mode_name(SearchMode m) {
  return m == SearchMode::exhaustive ? "exhaustive" : "greedy";
}

/// Outcome of a ladder search for V+(f) = sup { V(g) : 0 <= g <= f } over
/// ladder functions g_i in {0, f_i/L, ..., f_i}.
struct LadderSearchResult {
  double value;
  RadialFunction maximizer;
  std::uint64_t evaluations;
  SearchMode mode;
};

namespace detail {

inline std::uint64_t ladder_cardinality(int levels, std::size_t nodes) {
  const std::uint64_t base = static_cast<std::uint64_t>(levels) + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    total *= base;
  }
  return total;
}

// level k of node i; the top level is f_i itself, exactly
inline double ladder_value(const std::vector<double>& f, std::size_t i, int k,
                           int levels) {
  if (k == 0) return 0.0;
  if (k == levels) return f[i];
  return f[i] * static_cast<double>(k) / static_cast<double>(levels);
}

// V on raw node values; avoids building a RadialFunction in theta hot loops
inline double evaluate_values(const ValuationSpec& spec, const GridPtr& grid,
                              const std::vector<double>& values) {
  if (spec.is_theta()) {
    const ThetaCurve& curve = spec.curve();
    KahanSum acc;
    for (std::size_t i = 0; i < values.size(); ++i)
      acc.add(grid->weights[i] * eval_theta(curve, values[i]));
    return acc.value();
  }
  return evaluate(spec, RadialFunction(grid, values));
}

}  // namespace detail

/// Approximates V+(f) by searching ladder functions under f.
///
/// Exhaustive mode enumerates all (L+1)^N ladder functions and returns the
/// exact maximum over the ladder; it refuses to start if that exceeds
/// `budget`. Greedy mode runs coordinate ascent from 0, f and seeded random
/// starts and returns the best local maximum. Both modes dominate V(f) and
/// V({0}) since those lattice points are always visited.
inline LadderSearchResult sup_search_decompose(const ValuationSpec& spec,
                                               const RadialFunction& f, int levels,
                                               SearchMode mode,
                                               std::uint64_t budget = 10'000'000,
                                               int restarts = 4,
                                               std::uint64_t seed = 0) {
  if (levels < 1) throw std::invalid_argument("ladder needs levels >= 1");
  const std::vector<double>& fv = f.values();
  const std::size_t n = fv.size();
  const GridPtr& grid = f.grid();
  std::uint64_t evaluations = 0;

  std::vector<double> g(n, 0.0);
  std::vector<int> k(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_k;

  if (mode == SearchMode::exhaustive) {
    const std::uint64_t required = detail::ladder_cardinality(levels, n);
    if (required > budget)
      throw BudgetExceededError(
          "exhaustive ladder search needs " + std::to_string(required) +
              " evaluations, budget is " + std::to_string(budget),
          required);
    for (;;) {
      const double v = detail::evaluate_values(spec, grid, g);
      ++evaluations;
      if (v > best) {
        best = v;
        best_k = k;
      }
      std::size_t pos = 0;
      while (pos < n) {
        if (++k[pos] <= levels) {
          g[pos] = detail::ladder_value(fv, pos, k[pos], levels);
          break;
        }
        k[pos] = 0;
        g[pos] = 0.0;
        ++pos;
      }
      if (pos == n) break;
    }
  } else {
    if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int r = 0; r < restarts + 2; ++r) {
      SplitMix64 rng(split_seed(seed, static_cast<std::uint64_t>(r)));
      if (r == 0)
        std::fill(k.begin(), k.end(), 0);
      else if (r == 1)
        std::fill(k.begin(), k.end(), levels);
      else
        for (std::size_t i = 0; i < n; ++i)
          k[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(levels) + 1));
      for (std::size_t i = 0; i < n; ++i)
        g[i] = detail::ladder_value(fv, i, k[i], levels);
      double current = detail::evaluate_values(spec, grid, g);
      ++evaluations;
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t i = n; i > 1; --i)
          std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t i : order) {
          int best_level = k[i];
          double best_here = current;
          for (int lv = 0; lv <= levels; ++lv) {
            if (lv == k[i]) continue;
            g[i] = detail::ladder_value(fv, i, lv, levels);
            const double v = detail::evaluate_values(spec, grid, g);
            ++evaluations;
            if (v > best_here) {
              best_here = v;
              best_level = lv;
            }
          }
          if (best_here > current + 1e-15) {
            current = best_here;
            k[i] = best_level;
            improved = true;
          }
          g[i] = detail::ladder_value(fv, i, k[i], levels);
        }
      }
      if (current > best) {
        best = current;
        best_k = k;
      }
    }
  }

  std::vector<double> best_values(n);
  for (std::size_t i = 0; i < n; ++i)
    best_values[i] = detail::ladder_value(fv, i, best_k[i], levels);
  return LadderSearchResult{best, RadialFunction(grid, std::move(best_values)),
                            evaluations, mode};
}

/// End-to-end record of one verified decomposition V = V+ - V- (+ offset for
/// profiles with theta(0) != 0).
struct DecompositionReport {
  ThetaCurve theta_plus;
  ThetaCurve theta_minus;
  double offset = 0.0;
  double max_reconstruction_residual = 0.0;  // max |V+(K) - V-(K) - (V(K) - offset)|
  double min_Vplus = 0.0;
  double min_Vminus = 0.0;
  double Vplus_at_origin = 0.0;
  double Vminus_at_origin = 0.0;
  std::optional<double> invariance_deviation;
  std::size_t body_count = 0;

  bool reconstruction_ok(double tol) const {
    return max_reconstruction_residual <= tol;
  }
  bool positivity_ok(double tol) const {
    return min_Vplus >= -tol && min_Vminus >= -tol;
  }
  bool origin_ok() const { return Vplus_at_origin == 0.0 && Vminus_at_origin == 0.0; }
  bool invariance_ok(double tol) const {
    return !invariance_deviation.has_value() || *invariance_deviation <= tol;
  }
};

/// Decomposes a theta valuation as V = V+ - V- and verifies the claims on the
/// supplied bodies: reconstruction residual, positivity of both parts, exact
/// vanishing at {0}, and (when circle-grid rotation steps are given) the
/// invariance of V+ and V- under exact sampled rotations.
inline DecompositionReport verify_decomposition(
    const ValuationSpec& spec, const std::vector<RadialFunction>& bodies,
    const std::vector<std::int64_t>& rotation_steps = {},
    std::int64_t resolution = kDefaultDecomposeResolution) {
  if (!spec.is_theta())
    throw std::invalid_argument("decomposition reports require a theta valuation");
  if (bodies.empty()) throw std::invalid_argument("need at least one body");

  ThetaDecomposition dec = decompose_theta(spec.curve(), resolution);
  const ValuationSpec vplus = make_theta_valuation(dec.theta_plus);
  const ValuationSpec vminus = make_theta_valuation(dec.theta_minus);

  DecompositionReport report;
  report.theta_plus = dec.theta_plus;
  report.theta_minus = dec.theta_minus;
  report.offset = dec.offset;
  report.body_count = bodies.size();
  report.min_Vplus = std::numeric_limits<double>::infinity();
  report.min_Vminus = std::numeric_limits<double>::infinity();

  for (const RadialFunction& body : bodies) {
    const double vp = evaluate(vplus, body);
    const double vm = evaluate(vminus, body);
    const double v = evaluate(spec, body);
    report.max_reconstruction_residual = std::max(
        report.max_reconstruction_residual, std::abs(vp - vm - (v - dec.offset)));
    report.min_Vplus = std::min(report.min_Vplus, vp);
    report.min_Vminus = std::min(report.min_Vminus, vm);
  }

  const RadialFunction origin = origin_body(bodies.front().grid());
  report.Vplus_at_origin = evaluate(vplus, origin);
  report.Vminus_at_origin = evaluate(vminus, origin);

  if (!rotation_steps.empty()) {
    double worst = 0.0;
    for (const RadialFunction& body : bodies) {
      const double vp = evaluate(vplus, body);
      const double vm = evaluate(vminus, body);
      for (std::int64_t s : rotation_steps) {
        const RadialFunction rotated = rotate_sampled(body, s);
        worst = std::max(worst, std::abs(evaluate(vplus, rotated) - vp));
        worst = std::max(worst, std::abs(evaluate(vminus, rotated) - vm));
      }
    }
    report.invariance_deviation = worst;
  }
  return report;
}

/// One trial of the two-route comparison: exhaustive ladder sup versus the
/// closed-form positive part integrated directly.
struct OracleAgreementRow {
  std::uint64_t trial;
  std::int64_t grid_size;
  int levels;
  double disagreement;  // |ladder sup - integral of theta_plus over f|
  double bound;         // Lipschitz(theta) * sup f / levels
  bool within_bound;
};

/// Cross-validates the running-max decomposition against the sup definition:
/// on small circle grids, the exhaustive ladder sup of V over {0 <= g <= f}
/// must match the quadrature of theta_plus composed with f to within the
/// ladder spacing bound. Seeded random bodies, one row per trial.
inline std::vector<OracleAgreementRow> oracle_agreement(
    const ValuationSpec& spec, const std::vector<std::int64_t>& grid_sizes,
    int levels, std::uint64_t trials, std::uint64_t seed,
    std::uint64_t budget = 10'000'000,
    std::int64_t resolution = kDefaultDecomposeResolution) {
  if (!spec.is_theta())
    throw std::invalid_argument("oracle agreement requires a theta valuation");
  ThetaDecomposition dec = decompose_theta(spec.curve(), resolution);
  const ValuationSpec vplus = make_theta_valuation(dec.theta_plus);
  const double lipschitz = lipschitz_constant(spec.curve());

  std::vector<OracleAgreementRow> rows;
  rows.reserve(grid_sizes.size() * trials);
  std::uint64_t stream = 0;
  for (std::int64_t n : grid_sizes) {
    const GridPtr grid = make_circle_grid(n);
    for (std::uint64_t t = 0; t < trials; ++t, ++stream) {
      SplitMix64 rng(split_seed(seed, stream));
      const RadialFunction f =
          random_radial_function(grid, spec.lambda_max(), rng);
      const LadderSearchResult search =
          sup_search_decompose(spec, f, levels, SearchMode::exhaustive, budget);
      const double direct = evaluate(vplus, f);
      const double disagreement = std::abs(search.value - direct);
      const double bound = lipschitz * f.sup_norm() / static_cast<double>(levels);
      rows.push_back({t, n, levels, disagreement, bound, disagreement <= bound});
    }
  }
  return rows;
}

}  // namespace starval
