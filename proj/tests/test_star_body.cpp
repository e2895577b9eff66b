#include <cmath>
#include <span>
#include <vector>

#include "catch_amalgamated.hpp"
#include "starval/errors.hpp"
#include "starval/star_body.hpp"

using namespace starval;

namespace {

RadialFunction pair_body(const GridPtr& g, double a, double b) {
  return RadialFunction(g, {a, b});
}

}  // namespace

TEST_CASE("sampling closed forms") {
  const auto g = make_circle_grid(32);
  const auto ball2 = sample(make_ball(2, 2.0), g);
  for (std::size_t i = 0; i < ball2.size(); ++i) REQUIRE(ball2[i] == 2.0);

  const auto zero = sample(make_origin(2), g);
  for (std::size_t i = 0; i < zero.size(); ++i) REQUIRE(zero[i] == 0.0);

  // ellipse radial value solved analytically from the boundary equation
  const double a = 2.0, b = 1.0;
  const auto ell = sample(make_ellipsoid({a, b}), g);
  for (std::size_t i = 0; i < ell.size(); ++i) {
    const double phi = circle_angle(*g, i);
    const double expected =
        1.0 / std::sqrt(std::cos(phi) * std::cos(phi) / (a * a) +
                        std::sin(phi) * std::sin(phi) / (b * b));
    REQUIRE(std::abs(ell[i] - expected) < 1e-12);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const auto g = make_circle_grid(8);
  REQUIRE_THROWS_AS(sample(make_ellipsoid({1, 2, 3}), g), std::invalid_argument);
}

TEST_CASE("lattice operations on a two-node grid") {
  const auto g = make_circle_grid(2);
  const auto f = pair_body(g, 1, 3);
  const auto h = pair_body(g, 2, 2);
  const auto u = radial_union(f, h);
  const auto n = radial_intersection(f, h);
  const auto s = radial_sum(f, h);
  REQUIRE(u.values() == std::vector<double>{2, 3});
  REQUIRE(n.values() == std::vector<double>{1, 2});
  REQUIRE(s.values() == std::vector<double>{3, 5});
  REQUIRE(radial_metric(f, h) == 1.0);
  REQUIRE(radial_metric(f, f) == 0.0);
}

TEST_CASE("origin body is the lattice bottom") {
  const auto g = make_circle_grid(16);
  SplitMix64 rng(3);
  const auto f = random_radial_function(g, 2.0, rng);
  const auto zero = origin_body(g);
  REQUIRE(radial_union(f, zero).values() == f.values());
  REQUIRE(radial_intersection(f, zero).values() == zero.values());
  REQUIRE(radial_sum(f, zero).values() == f.values());
  REQUIRE(radial_metric(sample(make_ball(2, 1.5), g), zero) == 1.5);

  const auto summed = radial_sum(sample(make_ball(2, 1.0), g), sample(make_ball(2, 2.0), g));
  REQUIRE(summed.values() == sample(make_ball(2, 3.0), g).values());
}

TEST_CASE("lattice identities hold pointwise") {
  const auto g = make_circle_grid(64);
  SplitMix64 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    const auto f = random_radial_function(g, 3.0, rng);
    const auto h = random_radial_function(g, 3.0, rng);
    const auto u = radial_union(f, h);
    const auto n = radial_intersection(f, h);
    for (std::size_t i = 0; i < f.size(); ++i) {
      REQUIRE(u[i] + n[i] == f[i] + h[i]);  // max + min = sum, exactly
      REQUIRE(u[i] == std::max(f[i], h[i]));
      REQUIRE(n[i] == std::min(f[i], h[i]));
    }
    REQUIRE(radial_union(f, f).values() == f.values());
    REQUIRE(radial_union(f, h).values() == radial_union(h, f).values());
    const auto w = random_radial_function(g, 3.0, rng);
    REQUIRE(radial_union(radial_union(f, h), w).values() ==
            radial_union(f, radial_union(h, w)).values());

    double unorm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) unorm = std::max(unorm, u[i]);
    REQUIRE(unorm == std::max(f.sup_norm(), h.sup_norm()));
  }
}

TEST_CASE("radial metric is a metric") {
  const auto g = make_circle_grid(32);
  SplitMix64 rng(5);
  for (int rep = 0; rep < 25; ++rep) {
    const auto f = random_radial_function(g, 2.0, rng);
    const auto h = random_radial_function(g, 2.0, rng);
    const auto w = random_radial_function(g, 2.0, rng);
    REQUIRE(radial_metric(f, h) == radial_metric(h, f));
    REQUIRE(radial_metric(f, w) <= radial_metric(f, h) + radial_metric(h, w) + 1e-15);
    REQUIRE(radial_metric(f, f) == 0.0);
    if (f.values() != h.values()) REQUIRE(radial_metric(f, h) > 0.0);
  }
}

TEST_CASE("grid mismatch is rejected") {
  const auto f = origin_body(make_circle_grid(8));
  const auto h = origin_body(make_circle_grid(16));
  REQUIRE_THROWS_AS(radial_union(f, h), std::invalid_argument);
  REQUIRE_THROWS_AS(radial_metric(f, h), std::invalid_argument);
}

TEST_CASE("radial functions must be nonnegative and finite") {
  const auto g = make_circle_grid(2);
  REQUIRE_THROWS_AS(RadialFunction(g, {1.0, -0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(RadialFunction(g, {1.0, std::nan("")}), std::invalid_argument);
  REQUIRE_THROWS_AS(RadialFunction(g, {1.0}), std::invalid_argument);
}

TEST_CASE("membership bisection recovers radial functions") {
  const auto g = make_circle_grid(64);

  const auto unit_ball = radial_from_membership(
      [](std::span<const double> p) { return dot(p, p) <= 1.0; }, g, 2.0, 1e-9);
  for (std::size_t i = 0; i < unit_ball.size(); ++i)
    REQUIRE(std::abs(unit_ball[i] - 1.0) <= 1e-9);

  const auto degenerate = radial_from_membership(
      [](std::span<const double> p) { return dot(p, p) == 0.0; }, g, 2.0, 1e-9);
  for (std::size_t i = 0; i < degenerate.size(); ++i)
    REQUIRE(std::abs(degenerate[i]) <= 1e-9);

  // ellipse oracle against the closed-form generator
  const auto ellipse = radial_from_membership(
      [](std::span<const double> p) { return p[0] * p[0] / 4.0 + p[1] * p[1] <= 1.0; },
      g, 3.0, 1e-10);
  const auto analytic = sample(make_ellipsoid({2, 1}), g);
  REQUIRE(radial_metric(ellipse, analytic) <= 1e-9);
}

TEST_CASE("membership bisection reproduces generator samples") {
  const auto g = make_circle_grid(48);
  const auto gen = make_trigblob2(1.0, {{1, 0.3, 0.1}, {3, 0.15, -0.2}}, 0.05);
  const auto expected = sample(gen, g);
  // star-shaped membership induced by the generator itself
  const auto recovered = radial_from_membership(
      [&](std::span<const double> p) {
        const double r = norm(p);
        if (r == 0.0) return true;
        std::vector<double> t = {p[0] / r, p[1] / r};
        return r <= gen(t);
      },
      g, 4.0, 1e-10);
  REQUIRE(radial_metric(recovered, expected) <= 1e-9);
}

TEST_CASE("membership error cases") {
  const auto g = make_circle_grid(8);
  REQUIRE_THROWS_AS(
      radial_from_membership([](std::span<const double>) { return true; }, g, 1.0, 1e-6),
      UnboundedBodyError);
  REQUIRE_THROWS_AS(
      radial_from_membership([](std::span<const double>) { return false; }, g, 1.0, 1e-6),
      NotStarShapedError);
}

TEST_CASE("generator rotation") {
  const auto g = make_circle_grid(36);
  const auto gen = make_ellipsoid({2, 1});

  const auto same = rotate(gen, identity_matrix(2));
  REQUIRE(radial_metric(sample(same, g), sample(gen, g)) == 0.0);

  const auto ball = make_ball(2, 1.5);
  const auto ball_rot = rotate(ball, rotation2d(0.7231));
  for (std::size_t i = 0; i < g->node_count(); ++i)
    REQUIRE(sample(ball_rot, g)[i] == 1.5);

  // quarter turn swaps the ellipse axes
  const auto quarter = rotate(gen, rotation2d(kPi / 2));
  const auto swapped = make_ellipsoid({1, 2});
  REQUIRE(radial_metric(sample(quarter, g), sample(swapped, g)) <= 1e-12);

  REQUIRE_THROWS_AS(rotate(gen, {1, 1, 0, 1}), std::invalid_argument);

  // composition matches a single combined rotation
  const auto r1 = rotation2d(0.3), r2 = rotation2d(1.1);
  const auto twice = rotate(rotate(gen, r1), r2);
  const auto once = rotate(gen, rotation2d(1.4));
  REQUIRE(radial_metric(sample(twice, g), sample(once, g)) <= 1e-12);
}

TEST_CASE("sampled rotation is an index shift") {
  const auto g = make_circle_grid(4);
  const RadialFunction f(g, {1, 2, 3, 4});
  REQUIRE(rotate_sampled(f, 0).values() == f.values());
  REQUIRE(rotate_sampled(f, 4).values() == f.values());
  REQUIRE(rotate_sampled(f, 1).values() == std::vector<double>{4, 1, 2, 3});
  REQUIRE(rotate_sampled(f, -1).values() == std::vector<double>{2, 3, 4, 1});

  const auto ll = origin_body(make_latlong_grid(4, 8));
  REQUIRE_THROWS_AS(rotate_sampled(ll, 1), UnsupportedOperationError);
}

TEST_CASE("trigblob stays above its floor") {
  const auto g = make_circle_grid(128);
  const auto blob = make_trigblob2(0.2, {{1, 0.8, 0.0}, {2, 0.0, 0.5}}, 0.1);
  const auto f = sample(blob, g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    REQUIRE(f[i] >= 0.1);
    const double phi = circle_angle(*g, i);
    const double series = 0.2 + 0.8 * std::cos(phi) + 0.5 * std::sin(2 * phi);
    // the generator recovers phi through atan2, so values agree to rounding
    REQUIRE(std::abs(f[i] - std::max(series, 0.1)) <= 1e-12);
  }
}

TEST_CASE("trigblob on the 2-sphere") {
  const auto g = make_latlong_grid(12, 24);
  const auto blob = make_trigblob3(1.0, {{1, 0, 0.3}, {2, 2, 0.2}, {1, -1, 0.1}}, 0.05);
  const auto f = sample(blob, g);
  for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(f[i] >= 0.05);
  // not rotationally symmetric: values vary across a band
  REQUIRE(f.sup_norm() > 1.0);
}
