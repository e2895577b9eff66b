#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "starval/geometry.hpp"
#include "starval/rng.hpp"

namespace starval {

enum class GridKind { circle, latlong, montecarlo };

inline const char* grid_kind_name(GridKind k) {
  switch (k) {
    case GridKind::circle: return "circle";
    case GridKind::latlong: return "latlong";
    case GridKind::montecarlo: return "montecarlo";
  }
  return "?";
}

/// Quadrature discretization of S^{n-1}. Nodes are unit vectors, weights are
/// nonnegative and sum to 1, so integrate() realizes the normalized measure
/// with m(S^{n-1}) = 1. Node ordering is part of the grid's identity: sampled
/// functions are only comparable on the same grid.
struct SphereGrid {
  int dim = 2;
  GridKind kind = GridKind::circle;
  std::vector<double> coords;   // node_count * dim, row-major
  std::vector<double> weights;  // node_count
  std::vector<std::int64_t> params;  // circle: {N}; latlong: {P,Q}; montecarlo: {n,N}
  std::optional<std::uint64_t> seed;  // montecarlo only

  std::size_t node_count() const { return weights.size(); }

  std::span<const double> node(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Short textual identity, e.g. "circle:256" or "montecarlo:4,1000:seed=1".
inline std::string grid_descriptor(const SphereGrid& g) {
  std::string s = grid_kind_name(g.kind);
  s += ':';
  for (std::size_t i = 0; i < g.params.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.params[i]);
  }
  if (g.seed) s += ":seed=" + std::to_string(*g.seed);
  return s;
}

/// Grid compatibility: same object, or bit-identical content.
inline bool same_grid(const SphereGrid& a, const SphereGrid& b) {
  if (&a == &b) return true;
  return a.dim == b.dim && a.kind == b.kind && a.coords == b.coords &&
         a.weights == b.weights;
}

inline bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return a != nullptr;
  if (!a || !b) return false;
  return same_grid(*a, *b);
}

/// N equally spaced directions on S^1, each carrying weight 1/N.
inline GridPtr make_circle_grid(std::int64_t n_nodes) {
  if (n_nodes < 2) throw std::invalid_argument("circle grid needs N >= 2");
  auto g = std::make_shared<SphereGrid>();
  g->dim = 2;
  g->kind = GridKind::circle;
  g->params = {n_nodes};
  g->coords.resize(static_cast<std::size_t>(n_nodes) * 2);
  g->weights.assign(static_cast<std::size_t>(n_nodes), 1.0 / static_cast<double>(n_nodes));
  for (std::int64_t k = 0; k < n_nodes; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(n_nodes);
    g->coords[static_cast<std::size_t>(k) * 2] = std::cos(phi);
    g->coords[static_cast<std::size_t>(k) * 2 + 1] = std::sin(phi);
  }
  return g;
}

/// Node angle of circle grid node k.
inline double circle_angle(const SphereGrid& g, std::size_t k) {
  return kTwoPi * static_cast<double>(k) / static_cast<double>(g.params.at(0));
}

/// Latitude-longitude product grid on S^2: P polar bands at midpoints
/// (p+1/2)*pi/P, Q azimuthal steps, weights proportional to sin of the band
/// colatitude and normalized to total 1.
inline GridPtr make_latlong_grid(std::int64_t p_bands, std::int64_t q_steps) {
  if (p_bands < 2) throw std::invalid_argument("latlong grid needs P >= 2");
  if (q_steps < 3) throw std::invalid_argument("latlong grid needs Q >= 3");
  auto g = std::make_shared<SphereGrid>();
  g->dim = 3;
  g->kind = GridKind::latlong;
  g->params = {p_bands, q_steps};
  const std::size_t count = static_cast<std::size_t>(p_bands) * static_cast<std::size_t>(q_steps);
  g->coords.resize(count * 3);
  g->weights.resize(count);
  double sin_total = 0.0;
  std::vector<double> band_sin(static_cast<std::size_t>(p_bands));
  for (std::int64_t p = 0; p < p_bands; ++p) {
    const double theta = (static_cast<double>(p) + 0.5) * kPi / static_cast<double>(p_bands);
    band_sin[static_cast<std::size_t>(p)] = std::sin(theta);
    sin_total += band_sin[static_cast<std::size_t>(p)];
  }
  std::size_t i = 0;
  for (std::int64_t p = 0; p < p_bands; ++p) {
    const double theta = (static_cast<double>(p) + 0.5) * kPi / static_cast<double>(p_bands);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double w = band_sin[static_cast<std::size_t>(p)] /
                     (sin_total * static_cast<double>(q_steps));
    for (std::int64_t q = 0; q < q_steps; ++q, ++i) {
      const double phi = kTwoPi * static_cast<double>(q) / static_cast<double>(q_steps);
      g->coords[i * 3] = st * std::cos(phi);
      g->coords[i * 3 + 1] = st * std::sin(phi);
      g->coords[i * 3 + 2] = ct;
      g->weights[i] = w;
    }
  }
  return g;
}

/// N i.i.d. uniform directions on S^{n-1} (normalized Gaussian vectors from
/// the seeded SplitMix64 stream), each with weight 1/N.
inline GridPtr make_mc_grid(int dim, std::int64_t n_nodes, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("montecarlo grid needs dim >= 2");
  if (n_nodes < 1) throw std::invalid_argument("montecarlo grid needs N >= 1");
  auto g = std::make_shared<SphereGrid>();
  g->dim = dim;
  g->kind = GridKind::montecarlo;
  g->params = {dim, n_nodes};
  g->seed = seed;
  g->coords.resize(static_cast<std::size_t>(n_nodes) * dim);
  g->weights.assign(static_cast<std::size_t>(n_nodes), 1.0 / static_cast<double>(n_nodes));
  SplitMix64 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (std::int64_t k = 0; k < n_nodes; ++k) {
    double nrm = 0.0;
    do {
      for (int j = 0; j < dim; ++j) v[static_cast<std::size_t>(j)] = rng.gaussian();
      nrm = norm(v);
    } while (nrm < 1e-9);
    for (int j = 0; j < dim; ++j)
      g->coords[static_cast<std::size_t>(k) * dim + j] = v[static_cast<std::size_t>(j)] / nrm;
  }
  return g;
}

/// Quadrature of one sampled function: sum of w_i * values_i (compensated).
inline double integrate(const SphereGrid& grid, std::span<const double> values) {
  if (values.size() != grid.node_count())
    throw std::invalid_argument("integrate: values length does not match node count");
  KahanSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("integrate: non-finite value");
    acc.add(grid.weights[i] * values[i]);
  }
  return acc.value();
}

inline double integrate(const GridPtr& grid, std::span<const double> values) {
  return integrate(*grid, values);
}

/// Structural invariants; throws std::invalid_argument on violation. Used by
/// deserialization and tests.
inline void validate_grid(const SphereGrid& g) {
  if (g.dim < 2) throw std::invalid_argument("grid dim must be >= 2");
  if (g.weights.empty()) throw std::invalid_argument("grid has no nodes");
  if (g.coords.size() != g.weights.size() * static_cast<std::size_t>(g.dim))
    throw std::invalid_argument("grid coords/weights size mismatch");
  if (g.kind != GridKind::montecarlo && g.node_count() < 2)
    throw std::invalid_argument("grid needs at least 2 nodes");
  KahanSum wsum;
  for (double w : g.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("grid weight is negative");
    wsum.add(w);
  }
  if (std::abs(wsum.value() - 1.0) > 1e-12)
    throw std::invalid_argument("grid weights do not sum to 1");
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (std::abs(norm(g.node(i)) - 1.0) > 1e-12)
      throw std::invalid_argument("grid node is not unit length");
  }
  if (g.kind == GridKind::circle || g.kind == GridKind::latlong) {
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t j = i + 1; j < g.node_count(); ++j)
        if (chord_distance(g.node(i), g.node(j)) < 1e-12)
          throw std::invalid_argument("grid nodes are not pairwise distinct");
  }
}

/// Smallest chordal distance between distinct nodes. Linear scan per pair;
/// meant for test-scale grids.
inline double min_node_spacing(const SphereGrid& g) {
  double best = 2.0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (std::size_t j = i + 1; j < g.node_count(); ++j)
      best = std::min(best, chord_distance(g.node(i), g.node(j)));
  return best;
}

}  // namespace starval
