// Acceptance suite: one self-contained scenario per criterion, each printed
// as a single [PASS]/[FAIL] line with its measured figure and pinned limit.
// Exit code is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "starval/starval.hpp"

using namespace starval;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

void run_criterion(int id, const std::string& name,
                   const std::function<Outcome()>& body,
                   double time_limit_s = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome{false, "exception"};
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0 && seconds >= time_limit_s) {
    outcome.pass = false;
    outcome.detail += " OVER TIME LIMIT " + fmt(time_limit_s) + "s";
  }
  if (!outcome.pass) ++failures;
  std::printf("[%s] %2d %-28s %s [%.2fs]\n", outcome.pass ? "PASS" : "FAIL", id,
              name.c_str(), outcome.detail.c_str(), seconds);
  std::fflush(stdout);
}

// 1. The valuation identity V(KuL) + V(KnL) = V(K) + V(L) holds to rounding
// for profile-type valuations: 100 seeded random pairs per profile on a
// 256-node circle grid, scaled tolerance 1e-12.
Outcome valuation_identity() {
  const auto grid = make_circle_grid(256);
  const double domain = 2.0;
  const std::vector<ThetaCurve> curves = {make_power_curve(1, domain),
                                          make_power_curve(2, domain),
                                          make_sine_curve(1, 1, domain)};
  double worst = 0.0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto spec = make_theta_valuation(curves[c]);
    for (int p = 0; p < 100; ++p) {
      SplitMix64 rng(split_seed(1, c * 100 + static_cast<std::uint64_t>(p)));
      const auto k = random_radial_function(grid, domain, rng);
      const auto l = random_radial_function(grid, domain, rng);
      const double scale =
          1.0 + std::abs(evaluate(spec, k)) + std::abs(evaluate(spec, l));
      worst = std::max(worst, std::abs(valuation_residual(spec, k, l)) / scale);
    }
  }
  return {worst <= 1e-12, "max_scaled_residual=" + fmt(worst) + " (limit 1e-12)"};
}

// 2. extract_theta recovers the profile exactly at 50 sample radii for every
// preset form (constant integrand against a probability measure).
Outcome representation_exactness() {
  const auto grid = make_circle_grid(256);
  const std::vector<ThetaCurve> curves = {
      make_power_curve(1, 2), make_power_curve(2, 2), make_sine_curve(1, 1, kTwoPi),
      make_polynomial_curve({0.25, -1.0, 0.5}, 2.0),
      make_piecewise_linear_curve({0, 0.4, 1.1, 2}, {0.3, -0.7, 1.2, 0.5})};
  std::vector<double> samples;
  double worst = 0.0;
  for (const ThetaCurve& curve : curves) {
    samples.clear();
    for (int i = 0; i < 50; ++i) samples.push_back(curve.domain_max * (i / 49.0));
    const auto recovered = extract_theta(make_theta_valuation(curve), grid, samples);
    for (double x : samples)
      worst = std::max(worst, std::abs(eval_theta(recovered, x) - eval_theta(curve, x)));
  }
  return {worst <= 1e-12, "max_error=" + fmt(worst) + " (limit 1e-12)"};
}

// 3. Quadrature convergence on the ellipse: the normalized second moment of
// ellipsoid(2,1) tends to the closed-form area identity a*b = 2, reaching
// 1e-6 by N = 2048 and never degrading past the 1e-12 rounding floor as N
// doubles. (Equal-weight circle quadrature is spectrally accurate here, so
// the error bottoms out at rounding noise almost immediately.)
Outcome quadrature_convergence() {
  const auto spec = make_theta_valuation(make_power_curve(2, 4));
  const auto gen = make_ellipsoid({2, 1});
  std::vector<double> errors;
  for (int n : {128, 256, 512, 1024, 2048}) {
    const auto grid = make_circle_grid(n);
    errors.push_back(std::abs(evaluate(spec, sample(gen, grid)) - 2.0));
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    if (errors[i + 1] > std::max(errors[i], 1e-12)) monotone = false;
  const bool pass = errors.back() <= 1e-6 && monotone;
  return {pass, "err_128=" + fmt(errors.front()) + " err_2048=" + fmt(errors.back()) +
                    " (limit 1e-6, floor 1e-12)"};
}

// 4. Jordan decomposition of the sine profile on [0, 2pi]: both parts
// nonnegative, the positive part nondecreasing and 0 at 0, and V+ - V-
// reconstructs V within 1e-9 over 1000 seeded random bodies.
Outcome jordan_decomposition() {
  const auto curve = make_sine_curve(1, 1, kTwoPi);
  const auto spec = make_theta_valuation(curve);
  const auto dec = decompose_theta(curve, kDefaultDecomposeResolution);

  const auto& plus = std::get<ThetaCurve::PiecewiseLinear>(dec.theta_plus.form);
  const auto& minus = std::get<ThetaCurve::PiecewiseLinear>(dec.theta_minus.form);
  bool curves_ok = plus.ys.front() == 0.0 && minus.ys.front() == 0.0;
  for (std::size_t i = 0; i < plus.ys.size(); ++i) {
    if (plus.ys[i] < -1e-12) curves_ok = false;
    if (i && plus.ys[i] < plus.ys[i - 1] - 1e-12) curves_ok = false;
  }
  for (double y : minus.ys)
    if (y < -1e-12) curves_ok = false;

  const auto grid = make_circle_grid(256);
  std::vector<RadialFunction> bodies;
  bodies.reserve(1000);
  for (int i = 0; i < 1000; ++i) {
    SplitMix64 rng(split_seed(4, static_cast<std::uint64_t>(i)));
    bodies.push_back(random_radial_function(grid, kTwoPi, rng));
  }
  const auto report =
      verify_decomposition(spec, bodies, {}, kDefaultDecomposeResolution);
  const bool pass = curves_ok && report.max_reconstruction_residual <= 1e-9;
  return {pass, "residual=" + fmt(report.max_reconstruction_residual) +
                    " (limit 1e-9), curves_ok=" + (curves_ok ? "yes" : "no")};
}

// 5. The ladder sup over {0 <= g <= f} (exhaustive enumeration of 9^6 ladder
// functions per trial) agrees with the integral of theta_plus to within the
// ladder bound Lip(theta) * sup f / L, for all 50 seeded trials.
Outcome sup_oracle_agreement() {
  const auto spec = make_theta_valuation(make_sine_curve(1, 1, kTwoPi));
  const auto rows = oracle_agreement(spec, {6}, 8, 50, 5);
  double worst_excess = -1e300;
  bool pass = true;
  for (const auto& row : rows) {
    worst_excess = std::max(worst_excess, row.disagreement - row.bound);
    pass = pass && row.within_bound;
  }
  return {pass, "trials=" + std::to_string(rows.size()) +
                    " worst(disagreement-bound)=" + fmt(worst_excess) + " (limit 0)"};
}

// 6. Positivity and origin normalization: V+ and V- stay above -1e-12 on all
// tested bodies and vanish exactly on {0}, for both a monotone and an
// oscillating profile.
Outcome positivity_and_origin() {
  const auto grid = make_circle_grid(256);
  bool pass = true;
  std::string detail;
  const std::vector<ThetaCurve> curves = {make_power_curve(2, kTwoPi),
                                          make_sine_curve(1, 1, kTwoPi)};
  for (const ThetaCurve& curve : curves) {
    std::vector<RadialFunction> bodies{origin_body(grid)};
    for (int i = 0; i < 200; ++i) {
      SplitMix64 rng(split_seed(6, static_cast<std::uint64_t>(i)));
      bodies.push_back(random_radial_function(grid, kTwoPi, rng));
    }
    const auto report = verify_decomposition(make_theta_valuation(curve), bodies, {},
                                             kDefaultDecomposeResolution);
    pass = pass && report.min_Vplus >= -1e-12 && report.min_Vminus >= -1e-12 &&
           report.Vplus_at_origin == 0.0 && report.Vminus_at_origin == 0.0;
    detail = "min_Vplus=" + fmt(report.min_Vplus) +
             " min_Vminus=" + fmt(report.min_Vminus) + " origin=(" +
             fmt(report.Vplus_at_origin) + "," + fmt(report.Vminus_at_origin) + ")";
  }
  return {pass, detail + " (limits -1e-12, exact 0)"};
}

// 7. Rotational invariance carries over to both parts: on a 360-node circle
// grid, exact grid-step rotations move V, V+ and V- of ellipsoid and blob
// bodies by at most 1e-12.
Outcome invariance_inheritance() {
  const auto grid = make_circle_grid(360);
  const auto curve = make_sine_curve(1, 1, kTwoPi);
  const auto dec = decompose_theta(curve, kDefaultDecomposeResolution);
  const std::vector<ValuationSpec> specs = {make_theta_valuation(curve),
                                            make_theta_valuation(dec.theta_plus),
                                            make_theta_valuation(dec.theta_minus)};
  std::vector<std::vector<double>> rotations;
  for (int s : {1, 7, 45, 90, 180, 233})
    rotations.push_back(rotation2d(kTwoPi * s / 360.0));
  const std::vector<BodyGenerator> gens = {
      make_ellipsoid({2, 1}),
      make_trigblob2(1.0, {{1, 0.4, 0.2}, {3, 0.1, -0.3}, {5, 0.05, 0.0}}, 0.0)};
  double worst = 0.0;
  for (const auto& spec : specs)
    for (const auto& gen : gens)
      worst = std::max(worst, check_rotational_invariance(spec, gen, rotations, grid));
  return {worst <= 1e-12, "max_deviation=" + fmt(worst) + " (limit 1e-12)"};
}

// 8. Rim decay: bumps confined to shrinking outer bands of a single node have
// valuations inside the envelope sup|theta| * m(band), with strictly
// decreasing band measures and an overall decaying figure.
Outcome rim_decay() {
  const auto grid = make_circle_grid(1024);
  const auto curve = make_sine_curve(1, 1, kTwoPi);
  const auto spec = make_theta_valuation(curve);
  const auto base = node_set_single_node(grid, 0);
  const std::vector<double> omegas{1.0, 0.5, 0.25, 0.125, 0.0625};
  const auto rows = rim_decay_profile(spec, base, 2.0, omegas, 8, 8);
  const double peak = sup_abs_theta(curve, 2.0);
  bool envelope = true, shrinking = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].sup_abs_value > peak * rows[i].band_measure + 1e-15) envelope = false;
    if (i && rows[i].band_measure >= rows[i - 1].band_measure) shrinking = false;
  }
  const bool decays = rows.back().sup_abs_value < rows.front().sup_abs_value;
  return {envelope && shrinking && decays,
          "sup_first=" + fmt(rows.front().sup_abs_value) +
              " sup_last=" + fmt(rows.back().sup_abs_value) +
              " envelope=" + (envelope ? "yes" : "no")};
}

// 9. Splitting: two overlapping arcs covering the circle induce a
// partition with max_i phi_i = 1 exactly at every node, supports inside the
// arcs, and exact recombination max_i (phi_i f) = f for 20 random bodies.
Outcome splitting() {
  const auto grid = make_circle_grid(512);
  const auto g1 = node_set_from_cap(grid, {1.0, 0.0}, 2.0);
  const auto g2 = node_set_from_cap(grid, {-1.0, 0.0}, 2.0);
  const auto phis = partition_of_unity(grid, {g1, g2});
  bool max_one = true, supports = true, recombines = true;
  for (std::size_t t = 0; t < grid->node_count(); ++t) {
    if (std::max(phis[0][t], phis[1][t]) != 1.0) max_one = false;
    if (phis[0][t] > 0.0 && !g1.contains(t)) supports = false;
    if (phis[1][t] > 0.0 && !g2.contains(t)) supports = false;
  }
  for (int b = 0; b < 20; ++b) {
    SplitMix64 rng(split_seed(9, static_cast<std::uint64_t>(b)));
    const auto f = random_radial_function(grid, 1.5, rng);
    const auto pieces = split_function(f, phis);
    for (std::size_t t = 0; t < f.size(); ++t)
      if (std::max(pieces[0][t], pieces[1][t]) != f[t]) recombines = false;
  }
  return {max_one && supports && recombines,
          std::string("max_phi_one=") + (max_one ? "yes" : "no") +
              " supports=" + (supports ? "yes" : "no") +
              " recombines=" + (recombines ? "yes" : "no") + " (all exact)"};
}

// 10. Boundedness on bounded sets: for theta(x) = x^2 and bodies inside the
// 2-ball, the analytic bound sup theta = 4 caps the empirical maximum, and
// the empirical maximum comes close (>= 3.5) on a small grid where rough
// random bodies can fill the ball.
Outcome boundedness() {
  const auto grid = make_circle_grid(3);
  const auto spec = make_theta_valuation(make_power_curve(2, 2));
  const auto report = check_bounded_on_bounded(spec, grid, 2.0, 10000, 10);
  const bool pass = report.analytic_bound.has_value() &&
                    *report.analytic_bound == 4.0 &&
                    report.empirical_max <= 4.0 + 1e-12 && report.empirical_max >= 3.5;
  return {pass, "empirical_max=" + fmt(report.empirical_max) +
                    " analytic_bound=" + fmt(*report.analytic_bound) +
                    " (limits: <= 4+1e-12, >= 3.5)"};
}

}  // namespace

int main() {
  run_criterion(1, "valuation-identity", valuation_identity, 1.0);
  run_criterion(2, "representation-exactness", representation_exactness, 1.0);
  run_criterion(3, "quadrature-convergence", quadrature_convergence);
  run_criterion(4, "jordan-decomposition", jordan_decomposition, 5.0);
  run_criterion(5, "sup-oracle-agreement", sup_oracle_agreement, 120.0);
  run_criterion(6, "positivity-and-origin", positivity_and_origin);
  run_criterion(7, "invariance-inheritance", invariance_inheritance);
  run_criterion(8, "rim-decay", rim_decay);
  run_criterion(9, "splitting", splitting);
  run_criterion(10, "boundedness", boundedness);
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures;
}
