#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "starval/geometry.hpp"
#include "starval/rng.hpp"
#include "starval/sphere_grid.hpp"
#include "starval/star_body.hpp"
#include "starval/valuation.hpp"

namespace starval {

/// Open spherical cap {t : angle(t, center) < angular_radius}. On S^1 this is
/// an open arc. Distances to the cap and to its complement have closed forms.
struct CapDescriptor {
  std::vector<double> center;  // unit vector
  double angular_radius;       // in (0, pi]
};

/// Finite set of points on the sphere (not necessarily grid nodes).
struct PointsDescriptor {
  std::vector<std::vector<double>> points;
};

/// Subset of the sphere realized as grid node indices, optionally backed by a
/// closed-form descriptor for exact distances. Distances without a descriptor
/// fall back to the nearest member/non-member node, a grid approximation.
class NodeSet {
 public:
  using Descriptor = std::variant<std::monostate, CapDescriptor, PointsDescriptor>;

  NodeSet(GridPtr grid, std::vector<std::uint32_t> indices,
          Descriptor descriptor = std::monostate{})
      : grid_(std::move(grid)),
        indices_(std::move(indices)),
        descriptor_(std::move(descriptor)) {
    if (!grid_) throw std::invalid_argument("node set needs a grid");
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    member_.assign(grid_->node_count(), 0);
    for (std::uint32_t i : indices_) {
      if (i >= grid_->node_count())
        throw std::invalid_argument("node set index out of range");
      member_[i] = 1;
    }
  }

  const GridPtr& grid() const { return grid_; }
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  const Descriptor& descriptor() const { return descriptor_; }
  bool contains(std::size_t node) const { return member_[node] != 0; }
  bool empty_on_grid() const { return indices_.empty(); }
  bool full_on_grid() const { return indices_.size() == grid_->node_count(); }

  /// Total quadrature weight of the member nodes.
  double measure() const {
    KahanSum acc;
    for (std::uint32_t i : indices_) acc.add(grid_->weights[i]);
    return acc.value();
  }

 private:
  GridPtr grid_;
  std::vector<std::uint32_t> indices_;
  std::vector<char> member_;
  Descriptor descriptor_;
};

inline NodeSet node_set_from_indices(GridPtr grid, std::vector<std::uint32_t> indices) {
  return NodeSet(std::move(grid), std::move(indices));
}

/// Open cap; member nodes are those with angle(t, center) strictly below the
/// radius.
inline NodeSet node_set_from_cap(GridPtr grid, std::vector<double> center,
                                 double angular_radius) {
  if (!(angular_radius > 0.0) || angular_radius > kPi)
    throw std::invalid_argument("cap radius must lie in (0, pi]");
  if (center.size() != static_cast<std::size_t>(grid->dim))
    throw std::invalid_argument("cap center dimension mismatch");
  const double nrm = norm(center);
  if (!(nrm > 0.0)) throw std::invalid_argument("cap center must be nonzero");
  for (double& c : center) c /= nrm;
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < grid->node_count(); ++i)
    if (angle_between(grid->node(i), center) < angular_radius)
      idx.push_back(static_cast<std::uint32_t>(i));
  return NodeSet(std::move(grid), std::move(idx),
                 CapDescriptor{std::move(center), angular_radius});
}

/// Finite point set; member nodes are those coinciding with a point.
inline NodeSet node_set_from_points(GridPtr grid,
                                    std::vector<std::vector<double>> points) {
  if (points.empty()) throw std::invalid_argument("point set must be nonempty");
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < grid->node_count(); ++i)
    for (const auto& p : points)
      if (chord_distance(grid->node(i), p) < 1e-12) {
        idx.push_back(static_cast<std::uint32_t>(i));
        break;
      }
  return NodeSet(std::move(grid), std::move(idx), PointsDescriptor{std::move(points)});
}

/// The singleton {node}.
inline NodeSet node_set_single_node(GridPtr grid, std::uint32_t node) {
  if (node >= grid->node_count())
    throw std::invalid_argument("node index out of range");
  const auto t = grid->node(node);
  return node_set_from_points(std::move(grid),
                              {std::vector<double>(t.begin(), t.end())});
}

/// Chordal distance from grid node `t` to the set. Exact for cap and point
/// descriptors, nearest member node otherwise.
inline double distance_to_set(const NodeSet& set, std::size_t node) {
  const auto t = set.grid()->node(node);
  if (const auto* cap = std::get_if<CapDescriptor>(&set.descriptor())) {
    const double psi = angle_between(t, cap->center);
    return psi <= cap->angular_radius ? 0.0
                                      : chord_of_angle(psi - cap->angular_radius);
  }
  if (const auto* pts = std::get_if<PointsDescriptor>(&set.descriptor())) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts->points) best = std::min(best, chord_distance(t, p));
    return best;
  }
  if (set.indices().empty())
    throw std::invalid_argument("distance to an empty node set");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t i : set.indices())
    best = std::min(best, chord_distance(t, set.grid()->node(i)));
  return best;
}

/// Chordal distance from node `t` to the complement of the set. Exact for
/// caps; zero for finite point sets (their complement is dense); nearest
/// non-member node otherwise. +infinity when the complement is empty on the
/// grid and no descriptor says otherwise.
inline double complement_distance(const NodeSet& set, std::size_t node) {
  const auto t = set.grid()->node(node);
  if (const auto* cap = std::get_if<CapDescriptor>(&set.descriptor())) {
    const double psi = angle_between(t, cap->center);
    return psi >= cap->angular_radius ? 0.0
                                      : chord_of_angle(cap->angular_radius - psi);
  }
  if (std::holds_alternative<PointsDescriptor>(set.descriptor())) return 0.0;
  if (!set.contains(node)) return 0.0;
  if (set.full_on_grid()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.grid()->node_count(); ++i)
    if (!set.contains(i)) best = std::min(best, chord_distance(t, set.grid()->node(i)));
  return best;
}

/// Outer parallel band around a base set: nodes at distance strictly between
/// 0 and the width.
struct BandSpec {
  NodeSet base;
  double width;
};

inline NodeSet outer_band(const GridPtr& grid, const BandSpec& spec) {
  if (!(spec.width > 0.0)) throw std::invalid_argument("band width must be > 0");
  if (!same_grid(grid, spec.base.grid()))
    throw std::invalid_argument("band base lives on a different grid");
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    const double d = distance_to_set(spec.base, i);
    if (d > 0.0 && d < spec.width) idx.push_back(static_cast<std::uint32_t>(i));
  }
  return NodeSet(grid, std::move(idx));
}

/// Partition of unity subordinate to the covers, in the max-combine sense:
/// phi_i(t) = d(t, complement of G_i) / max_j d(t, complement of G_j) inside
/// the union, 0 outside G_i. At every node of the union some phi_i equals 1
/// exactly, and supp phi_i stays inside G_i.
inline std::vector<std::vector<double>> partition_of_unity(
    const GridPtr& grid, const std::vector<NodeSet>& covers) {
  if (covers.empty()) throw std::invalid_argument("no covers given");
  bool any_nonempty = false;
  for (const NodeSet& g : covers) {
    if (!same_grid(grid, g.grid()))
      throw std::invalid_argument("cover lives on a different grid");
    any_nonempty = any_nonempty || !g.empty_on_grid();
  }
  if (!any_nonempty) throw std::invalid_argument("all covers are empty");

  const std::size_t count = grid->node_count();
  std::vector<std::vector<double>> phis(covers.size(),
                                        std::vector<double>(count, 0.0));
  std::vector<double> dist(covers.size());
  for (std::size_t t = 0; t < count; ++t) {
    double dmax = 0.0;
    for (std::size_t i = 0; i < covers.size(); ++i) {
      dist[i] = covers[i].contains(t) ? complement_distance(covers[i], t) : 0.0;
      dmax = std::max(dmax, dist[i]);
    }
    if (dmax == 0.0) continue;  // node outside the union
    for (std::size_t i = 0; i < covers.size(); ++i) {
      if (dist[i] == dmax)
        phis[i][t] = 1.0;
      else if (dist[i] > 0.0 && !std::isinf(dmax))
        phis[i][t] = dist[i] / dmax;
    }
  }
  return phis;
}

/// Splits f into pieces f_i = phi_i * f. Requires supp f inside the union of
/// the covers (where max_i phi_i = 1); the pieces then satisfy
/// max_i f_i = f at every node and 0 <= f_i <= f.
inline std::vector<RadialFunction> split_function(
    const RadialFunction& f, const std::vector<std::vector<double>>& phis) {
  if (phis.empty()) throw std::invalid_argument("no partition functions given");
  for (const auto& phi : phis)
    if (phi.size() != f.size())
      throw std::invalid_argument("partition length does not match the body");
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (f[t] == 0.0) continue;
    double m = 0.0;
    for (const auto& phi : phis) m = std::max(m, phi[t]);
    if (m < 1.0)
      throw std::invalid_argument("support of f is not contained in the cover union");
  }
  std::vector<RadialFunction> pieces;
  pieces.reserve(phis.size());
  for (const auto& phi : phis) {
    std::vector<double> v(f.size());
    for (std::size_t t = 0; t < f.size(); ++t) v[t] = phi[t] * f[t];
    pieces.emplace_back(f.grid(), std::move(v));
  }
  return pieces;
}

/// Tent profile supported in the band: height * (1 - |2 d / width - 1|) for
/// 0 < d < width, zero elsewhere. Peaks at distance width/2.
inline RadialFunction band_bump(const GridPtr& grid, const BandSpec& spec,
                                double height) {
  if (!(height >= 0.0)) throw std::invalid_argument("bump height must be >= 0");
  std::vector<double> v(grid->node_count(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = distance_to_set(spec.base, i);
    if (d > 0.0 && d < spec.width)
      v[i] = height * std::max(0.0, 1.0 - std::abs(2.0 * d / spec.width - 1.0));
  }
  return RadialFunction(grid, std::move(v));
}

struct RimDecayRow {
  double omega;
  double sup_abs_value;  // sup |V(f) - V({0})| over the bump family
  double band_measure;   // quadrature measure of the band
};

/// Decay of the valuation on shrinking outer bands. For each width the family
/// is the canonical tent bump plus seeded random sub-bumps supported in the
/// band with values at most `height`. Values are normalized by V({0}) so the
/// family's figure vanishes with the band.
inline std::vector<RimDecayRow> rim_decay_profile(const ValuationSpec& spec,
                                                  const NodeSet& base, double height,
                                                  const std::vector<double>& omegas,
                                                  std::uint64_t probes = 8,
                                                  std::uint64_t seed = 0) {
  if (!(height >= 0.0) || height > spec.lambda_max())
    throw std::domain_error("bump height outside [0, lambda_max]");
  const GridPtr& grid = base.grid();
  const double at_origin = evaluate(spec, origin_body(grid));
  std::vector<RimDecayRow> rows;
  rows.reserve(omegas.size());
  for (std::size_t oi = 0; oi < omegas.size(); ++oi) {
    const double omega = omegas[oi];
    const BandSpec band_spec{base, omega};
    const NodeSet band = outer_band(grid, band_spec);
    double sup = std::abs(evaluate(spec, band_bump(grid, band_spec, height)) - at_origin);
    std::vector<double> v(grid->node_count(), 0.0);
    for (std::uint64_t p = 0; p < probes; ++p) {
      SplitMix64 rng(split_seed(seed, oi * probes + p));
      std::fill(v.begin(), v.end(), 0.0);
      for (std::uint32_t i : band.indices()) v[i] = rng.uniform(0.0, height);
      sup = std::max(sup,
                     std::abs(evaluate(spec, RadialFunction(grid, v)) - at_origin));
    }
    rows.push_back({omega, sup, band.measure()});
  }
  return rows;
}

}  // namespace starval
