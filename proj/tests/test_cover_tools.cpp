#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "starval/cover_tools.hpp"

using namespace starval;

TEST_CASE("distance to a point set") {
  const auto g = make_circle_grid(8);
  const auto a = node_set_single_node(g, 0);
  REQUIRE(distance_to_set(a, 0) == 0.0);
  REQUIRE(std::abs(distance_to_set(a, 4) - 2.0) <= 1e-12);  // antipodal chord
  // chord of the node angle, computed independently
  for (std::size_t i = 1; i < 8; ++i) {
    const double expected = 2.0 * std::sin(0.5 * std::min(circle_angle(*g, i),
                                                          kTwoPi - circle_angle(*g, i)));
    REQUIRE(std::abs(distance_to_set(a, i) - expected) <= 1e-12);
  }
}

TEST_CASE("distance to a cap uses the chord-angle identity") {
  const auto g = make_circle_grid(256);
  const double alpha = 0.5;
  const auto cap = node_set_from_cap(g, {1.0, 0.0}, alpha);
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double phi = circle_angle(*g, i);
    const double psi = std::min(phi, kTwoPi - phi);  // angle to the center
    const double expected = psi <= alpha ? 0.0 : 2.0 * std::sin(0.5 * (psi - alpha));
    REQUIRE(std::abs(distance_to_set(cap, i) - expected) <= 1e-12);
  }
}

TEST_CASE("distance to an empty raw set is an error") {
  const auto g = make_circle_grid(8);
  const auto empty = node_set_from_indices(g, {});
  REQUIRE_THROWS_AS(distance_to_set(empty, 0), std::invalid_argument);
}

TEST_CASE("outer bands") {
  const auto g = make_circle_grid(16);
  const auto a = node_set_single_node(g, 3);

  // width below the node spacing leaves nothing
  const auto tiny = outer_band(g, {a, 1e-6});
  REQUIRE(tiny.empty_on_grid());

  // width beyond the diameter catches everything except the base
  const auto all = outer_band(g, {a, 3.0});
  REQUIRE(all.indices().size() == 15);
  REQUIRE(!all.contains(3));
}

TEST_CASE("band node count approximates the arc length") {
  const auto g = make_circle_grid(1024);
  const double alpha = 0.8, omega = 0.1;
  const auto cap = node_set_from_cap(g, {1.0, 0.0}, alpha);
  const auto band = outer_band(g, {cap, omega});
  // nodes with alpha < psi < alpha + 2*asin(omega/2), on both sides
  const double arc = 2.0 * 2.0 * std::asin(omega / 2.0);
  const double expected = 1024.0 * arc / kTwoPi;
  REQUIRE(std::abs(static_cast<double>(band.indices().size()) - expected) <= 2.0);
}

TEST_CASE("band measure shrinks with the width") {
  const auto g = make_circle_grid(512);
  const auto a = node_set_single_node(g, 0);
  double prev = 1e300;
  for (double omega : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    const double m = outer_band(g, {a, omega}).measure();
    REQUIRE(m <= prev);
    prev = m;
  }
}

TEST_CASE("partition of unity: single cover") {
  const auto g = make_circle_grid(64);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 1.0);
  const auto phis = partition_of_unity(g, {g1});
  for (std::size_t t = 0; t < g->node_count(); ++t)
    REQUIRE(phis[0][t] == (g1.contains(t) ? 1.0 : 0.0));
}

TEST_CASE("partition of unity: disjoint covers are indicators") {
  const auto g = make_circle_grid(64);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 0.6);
  const auto g2 = node_set_from_cap(g, {-1.0, 0.0}, 0.6);
  const auto phis = partition_of_unity(g, {g1, g2});
  for (std::size_t t = 0; t < g->node_count(); ++t) {
    REQUIRE(phis[0][t] == (g1.contains(t) ? 1.0 : 0.0));
    REQUIRE(phis[1][t] == (g2.contains(t) ? 1.0 : 0.0));
  }
}

TEST_CASE("partition of unity: overlapping arcs covering the circle") {
  const auto g = make_circle_grid(512);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 2.0);
  const auto g2 = node_set_from_cap(g, {-1.0, 0.0}, 2.0);
  const auto phis = partition_of_unity(g, {g1, g2});
  for (std::size_t t = 0; t < g->node_count(); ++t) {
    REQUIRE(std::max(phis[0][t], phis[1][t]) == 1.0);  // exact, at every node
    REQUIRE(phis[0][t] >= 0.0);
    REQUIRE(phis[0][t] <= 1.0);
    if (!g1.contains(t)) REQUIRE(phis[0][t] == 0.0);
    if (!g2.contains(t)) REQUIRE(phis[1][t] == 0.0);
  }
}

TEST_CASE("partition of unity: full-sphere cover wins everywhere") {
  const auto g = make_circle_grid(32);
  std::vector<std::uint32_t> all(32);
  for (std::uint32_t i = 0; i < 32; ++i) all[i] = i;
  const auto full = node_set_from_indices(g, all);
  const auto half = node_set_from_cap(g, {1.0, 0.0}, 1.0);
  const auto phis = partition_of_unity(g, {full, half});
  for (std::size_t t = 0; t < g->node_count(); ++t) {
    REQUIRE(phis[0][t] == 1.0);
    REQUIRE(phis[1][t] == 0.0);  // finite distance against an infinite one
  }
}

TEST_CASE("partition of unity rejects an all-empty cover list") {
  const auto g = make_circle_grid(8);
  const auto empty = node_set_from_indices(g, {});
  REQUIRE_THROWS_AS(partition_of_unity(g, {empty, empty}), std::invalid_argument);
  REQUIRE_THROWS_AS(partition_of_unity(g, {}), std::invalid_argument);
}

TEST_CASE("split_function distributes a body over the covers") {
  const auto g = make_circle_grid(128);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 2.0);
  const auto g2 = node_set_from_cap(g, {-1.0, 0.0}, 2.0);
  const auto phis = partition_of_unity(g, {g1, g2});

  const auto ball = sample(make_ball(2, 1.0), g);
  const auto pieces = split_function(ball, phis);
  REQUIRE(pieces.size() == 2);
  for (std::size_t t = 0; t < ball.size(); ++t) {
    REQUIRE(std::max(pieces[0][t], pieces[1][t]) == ball[t]);
    REQUIRE(pieces[0][t] >= 0.0);
    REQUIRE(pieces[0][t] <= ball[t]);
    REQUIRE(pieces[1][t] <= ball[t]);
  }

  const auto zero = origin_body(g);
  for (const auto& piece : split_function(zero, phis))
    REQUIRE(piece.sup_norm() == 0.0);
}

TEST_CASE("split_function with support in one cover") {
  const auto g = make_circle_grid(64);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 1.0);
  const auto g2 = node_set_from_cap(g, {-1.0, 0.0}, 1.0);
  const auto phis = partition_of_unity(g, {g1, g2});

  // bump supported strictly inside g1
  std::vector<double> v(g->node_count(), 0.0);
  const auto inner = node_set_from_cap(g, {1.0, 0.0}, 0.5);
  for (std::uint32_t i : inner.indices()) v[i] = 1.0;
  const RadialFunction f(g, v);
  const auto pieces = split_function(f, phis);
  REQUIRE(pieces[0].values() == f.values());
  REQUIRE(pieces[1].sup_norm() == 0.0);
}

TEST_CASE("split_function rejects support outside the union") {
  const auto g = make_circle_grid(64);
  const auto g1 = node_set_from_cap(g, {1.0, 0.0}, 0.5);
  const auto phis = partition_of_unity(g, {g1});
  const auto ball = sample(make_ball(2, 1.0), g);
  REQUIRE_THROWS_AS(split_function(ball, phis), std::invalid_argument);
}

TEST_CASE("band bump profile") {
  const auto g = make_circle_grid(8);
  const auto a = node_set_single_node(g, 0);

  const auto flat = band_bump(g, {a, 1.0}, 0.0);
  REQUIRE(flat.sup_norm() == 0.0);

  // width chosen so node 1 sits exactly at the tent apex; node 7 is at the
  // same distance only up to rounding
  const double spacing = chord_distance(g->node(0), g->node(1));
  const auto bump = band_bump(g, {a, 2.0 * spacing}, 1.5);
  REQUIRE(bump[1] == 1.5);
  REQUIRE(std::abs(bump[7] - 1.5) <= 1e-12);
  REQUIRE(bump[0] == 0.0);
  for (std::size_t i = 0; i < 8; ++i) {
    const double d = distance_to_set(a, i);
    if (d <= 0.0 || d >= 2.0 * spacing) REQUIRE(bump[i] == 0.0);
  }
}

TEST_CASE("rim decay profile obeys the measure envelope") {
  const auto g = make_circle_grid(512);
  const auto spec = make_theta_valuation(make_sine_curve(1, 1, kTwoPi));
  const auto a = node_set_single_node(g, 0);
  const std::vector<double> omegas{1.0, 0.5, 0.25, 0.125, 0.0625};
  const auto rows = rim_decay_profile(spec, a, 2.0, omegas, 6, 11);
  REQUIRE(rows.size() == omegas.size());
  const double peak = sup_abs_theta(spec.curve(), 2.0);  // = 1
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].sup_abs_value <= peak * rows[i].band_measure + 1e-15);
    if (i) REQUIRE(rows[i].band_measure <= rows[i - 1].band_measure);
  }
  REQUIRE(rows.back().sup_abs_value < rows.front().sup_abs_value);
}

TEST_CASE("rim decay on degenerate bases") {
  const auto g = make_circle_grid(64);
  const auto spec = make_theta_valuation(make_sine_curve(1, 1, 4));

  std::vector<std::uint32_t> all(64);
  for (std::uint32_t i = 0; i < 64; ++i) all[i] = i;
  const auto sphere = node_set_from_indices(g, all);
  for (const auto& row : rim_decay_profile(spec, sphere, 2.0, {0.5, 0.25}, 4, 0))
    REQUIRE(row.sup_abs_value == 0.0);  // the band around everything is empty

  const auto a = node_set_single_node(g, 0);
  for (const auto& row : rim_decay_profile(spec, a, 2.0, {1e-9}, 4, 0)) {
    REQUIRE(row.sup_abs_value == 0.0);
    REQUIRE(row.band_measure == 0.0);
  }
}

TEST_CASE("rim decay normalizes profiles with theta(0) != 0") {
  const auto g = make_circle_grid(128);
  // theta(0) = 1, so V({0}) = 1; the normalized family must still decay
  const auto spec = make_theta_valuation(
      make_piecewise_linear_curve({0, 1, 2}, {1, 2, 0}));
  const auto a = node_set_single_node(g, 0);
  const auto rows = rim_decay_profile(spec, a, 2.0, {0.5, 0.25, 0.125}, 4, 0);
  // sup |theta - theta(0)| on [0, 2] is 1, attained at both ends
  for (const auto& row : rows)
    REQUIRE(row.sup_abs_value <= 1.0 * row.band_measure + 1e-15);
}
