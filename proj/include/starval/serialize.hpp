#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "starval/cover_tools.hpp"
#include "starval/jordan.hpp"
#include "starval/sphere_grid.hpp"
#include "starval/star_body.hpp"
#include "starval/theta.hpp"
#include "starval/valuation.hpp"

namespace starval {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

inline json grid_to_json(const SphereGrid& g) {
  json params;
  switch (g.kind) {
    case GridKind::circle:
      params = {{"N", g.params.at(0)}};
      break;
    case GridKind::latlong:
      params = {{"P", g.params.at(0)}, {"Q", g.params.at(1)}};
      break;
    case GridKind::montecarlo:
      params = {{"n", g.params.at(0)}, {"N", g.params.at(1)}};
      break;
  }
  json nodes = json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto t = g.node(i);
    nodes.push_back(std::vector<double>(t.begin(), t.end()));
  }
  json out = {{"dim", g.dim},
              {"kind", grid_kind_name(g.kind)},
              {"params", params},
              {"nodes", nodes},
              {"weights", g.weights}};
  if (g.seed) out["seed"] = *g.seed;
  return out;
}

inline GridPtr grid_from_json(const json& j) {
  auto g = std::make_shared<SphereGrid>();
  g->dim = j.at("dim").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  const json& params = j.at("params");
  if (kind == "circle") {
    g->kind = GridKind::circle;
    g->params = {params.at("N").get<std::int64_t>()};
  } else if (kind == "latlong") {
    g->kind = GridKind::latlong;
    g->params = {params.at("P").get<std::int64_t>(), params.at("Q").get<std::int64_t>()};
  } else if (kind == "montecarlo") {
    g->kind = GridKind::montecarlo;
    g->params = {params.at("n").get<std::int64_t>(), params.at("N").get<std::int64_t>()};
  } else {
    throw std::invalid_argument("unknown grid kind: " + kind);
  }
  if (j.contains("seed")) g->seed = j.at("seed").get<std::uint64_t>();
  for (const auto& node : j.at("nodes"))
    for (const auto& c : node) g->coords.push_back(c.get<double>());
  g->weights = j.at("weights").get<std::vector<double>>();
  validate_grid(*g);
  return g;
}

/// Parses "circle:256", "latlong:64,128" or "montecarlo:4,1000" (alias
/// "mc:4,1000"); the seed only matters for Monte Carlo grids.
inline GridPtr grid_from_descriptor(const std::string& desc, std::uint64_t seed = 0) {
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  std::vector<std::int64_t> args;
  if (colon != std::string::npos) {
    std::stringstream ss(desc.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stoll(tok));
  }
  if (name == "circle") {
    if (args.size() != 1) throw std::invalid_argument("circle grid wants circle:N");
    return make_circle_grid(args[0]);
  }
  if (name == "latlong") {
    if (args.size() != 2) throw std::invalid_argument("latlong grid wants latlong:P,Q");
    return make_latlong_grid(args[0], args[1]);
  }
  if (name == "montecarlo" || name == "mc") {
    if (args.size() != 2)
      throw std::invalid_argument("montecarlo grid wants montecarlo:n,N");
    return make_mc_grid(static_cast<int>(args[0]), args[1], seed);
  }
  throw std::invalid_argument("unknown grid descriptor: " + desc);
}

// ---------------------------------------------------------------------------
// bodies
// ---------------------------------------------------------------------------

inline json body_to_json(const RadialFunction& f) {
  return {{"grid_ref", grid_descriptor(*f.grid())}, {"values", f.values()}};
}

inline RadialFunction body_from_json(const json& j, const GridPtr& grid) {
  if (j.contains("grid_ref") &&
      j.at("grid_ref").get<std::string>() != grid_descriptor(*grid))
    throw std::invalid_argument("body grid_ref does not match the supplied grid");
  return RadialFunction(grid, j.at("values").get<std::vector<double>>());
}

/// CSV rows of (angle-or-node-index, value); circle grids report the node
/// angle, everything else the node index.
inline std::string body_to_csv(const RadialFunction& f) {
  std::ostringstream out;
  out.precision(17);
  const bool circle = f.grid()->kind == GridKind::circle;
  out << (circle ? "angle" : "node") << ",value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (circle)
      out << circle_angle(*f.grid(), i);
    else
      out << i;
    out << ',' << f[i] << '\n';
  }
  return out.str();
}

inline json generator_to_json(const BodyGenerator& gen) {
  json inner;
  if (std::holds_alternative<BodyGenerator::Origin>(gen.form())) {
    inner["variant"] = "origin";
  } else if (const auto* b = std::get_if<BodyGenerator::Ball>(&gen.form())) {
    inner["variant"] = "ball";
    inner["radius"] = b->radius;
  } else if (const auto* e = std::get_if<BodyGenerator::Ellipsoid>(&gen.form())) {
    inner["variant"] = "ellipsoid";
    inner["semi_axes"] = e->semi_axes;
  } else if (const auto* t2 = std::get_if<BodyGenerator::TrigBlob2>(&gen.form())) {
    inner["variant"] = "trigblob2";
    inner["constant"] = t2->constant;
    inner["floor"] = t2->floor;
    json terms = json::array();
    for (const TrigTerm2& t : t2->terms)
      terms.push_back({{"k", t.harmonic}, {"cos", t.cos_coef}, {"sin", t.sin_coef}});
    inner["terms"] = terms;
  } else {
    const auto& t3 = std::get<BodyGenerator::TrigBlob3>(gen.form());
    inner["variant"] = "trigblob3";
    inner["constant"] = t3.constant;
    inner["floor"] = t3.floor;
    json terms = json::array();
    for (const TrigTerm3& t : t3.terms)
      terms.push_back({{"l", t.polar_mult}, {"m", t.azimuth_mult}, {"coef", t.coef}});
    inner["terms"] = terms;
  }
  inner["dim"] = gen.dim();
  if (gen.has_rotation()) inner["rotation"] = gen.rotation();
  return {{"generator", inner}};
}

inline BodyGenerator generator_from_json(const json& j) {
  const json& inner = j.contains("generator") ? j.at("generator") : j;
  const std::string variant = inner.at("variant").get<std::string>();
  const int dim = inner.value("dim", 2);
  BodyGenerator gen = make_origin(dim);
  if (variant == "origin") {
  } else if (variant == "ball") {
    gen = make_ball(dim, inner.at("radius").get<double>());
  } else if (variant == "ellipsoid") {
    gen = make_ellipsoid(inner.at("semi_axes").get<std::vector<double>>());
  } else if (variant == "trigblob2") {
    std::vector<TrigTerm2> terms;
    for (const auto& t : inner.at("terms"))
      terms.push_back({t.at("k").get<int>(), t.at("cos").get<double>(),
                       t.at("sin").get<double>()});
    gen = make_trigblob2(inner.at("constant").get<double>(), std::move(terms),
                         inner.value("floor", 0.0));
  } else if (variant == "trigblob3") {
    std::vector<TrigTerm3> terms;
    for (const auto& t : inner.at("terms"))
      terms.push_back({t.at("l").get<int>(), t.at("m").get<int>(),
                       t.at("coef").get<double>()});
    gen = make_trigblob3(inner.at("constant").get<double>(), std::move(terms),
                         inner.value("floor", 0.0));
  } else {
    throw std::invalid_argument("unknown generator variant: " + variant);
  }
  if (inner.contains("rotation"))
    gen.set_rotation(inner.at("rotation").get<std::vector<double>>());
  return gen;
}

// ---------------------------------------------------------------------------
// theta curves
// ---------------------------------------------------------------------------

inline json curve_to_json(const ThetaCurve& curve) {
  json out{{"domain_max", curve.domain_max}};
  if (const auto* p = std::get_if<ThetaCurve::Power>(&curve.form)) {
    out["form"] = "power";
    out["exponent"] = p->exponent;
    out["scale"] = p->scale;
  } else if (const auto* s = std::get_if<ThetaCurve::Sine>(&curve.form)) {
    out["form"] = "sine";
    out["frequency"] = s->frequency;
    out["amplitude"] = s->amplitude;
  } else if (const auto* q = std::get_if<ThetaCurve::Polynomial>(&curve.form)) {
    out["form"] = "polynomial";
    out["coeffs"] = q->coeffs;
  } else {
    const auto& pl = std::get<ThetaCurve::PiecewiseLinear>(curve.form);
    out["form"] = "piecewise_linear";
    out["xs"] = pl.xs;
    out["ys"] = pl.ys;
  }
  return out;
}

inline ThetaCurve curve_from_json(const json& j) {
  const std::string form = j.at("form").get<std::string>();
  if (form == "power")
    return make_power_curve(j.at("exponent").get<double>(),
                            j.at("domain_max").get<double>(), j.value("scale", 1.0));
  if (form == "sine")
    return make_sine_curve(j.at("frequency").get<double>(),
                           j.at("amplitude").get<double>(),
                           j.at("domain_max").get<double>());
  if (form == "polynomial")
    return make_polynomial_curve(j.at("coeffs").get<std::vector<double>>(),
                                 j.at("domain_max").get<double>());
  if (form == "piecewise_linear")
    return make_piecewise_linear_curve(j.at("xs").get<std::vector<double>>(),
                                       j.at("ys").get<std::vector<double>>());
  throw std::invalid_argument("unknown curve form: " + form);
}

/// (lambda, theta, theta_plus, theta_minus) table sampled at `step`, final
/// row pinned to the domain end.
inline std::string theta_table_csv(const ThetaCurve& curve,
                                   const ThetaDecomposition& dec, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  std::ostringstream out;
  out.precision(17);
  out << "lambda,theta,theta_plus,theta_minus\n";
  const double hi = curve.domain_max;
  double lambda = 0.0;
  for (std::int64_t k = 0; lambda < hi; ++k, lambda = step * static_cast<double>(k)) {
    if (lambda > hi) break;
    out << lambda << ',' << eval_theta(curve, lambda) << ','
        << eval_theta(dec.theta_plus, lambda) << ','
        << eval_theta(dec.theta_minus, lambda) << '\n';
  }
  out << hi << ',' << eval_theta(curve, hi) << ',' << eval_theta(dec.theta_plus, hi)
      << ',' << eval_theta(dec.theta_minus, hi) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline json curve_summary_json(const ThetaCurve& curve) {
  if (!curve.is_piecewise_linear()) return curve_to_json(curve);
  const auto& pl = std::get<ThetaCurve::PiecewiseLinear>(curve.form);
  if (pl.xs.size() <= 4097) return curve_to_json(curve);
  return {{"form", "piecewise_linear"},
          {"domain_max", curve.domain_max},
          {"node_count", pl.xs.size()}};
}

inline json decomposition_report_to_json(const DecompositionReport& r) {
  json out = {{"offset", r.offset},
              {"max_reconstruction_residual", r.max_reconstruction_residual},
              {"min_Vplus", r.min_Vplus},
              {"min_Vminus", r.min_Vminus},
              {"Vplus_at_origin", r.Vplus_at_origin},
              {"Vminus_at_origin", r.Vminus_at_origin},
              {"body_count", r.body_count},
              {"theta_plus", curve_summary_json(r.theta_plus)},
              {"theta_minus", curve_summary_json(r.theta_minus)}};
  if (r.invariance_deviation) out["invariance_deviation"] = *r.invariance_deviation;
  return out;
}

// ---------------------------------------------------------------------------
// node sets
// ---------------------------------------------------------------------------

inline json node_set_to_json(const NodeSet& set) {
  json out{{"indices", set.indices()}};
  if (const auto* cap = std::get_if<CapDescriptor>(&set.descriptor()))
    out["cap"] = {{"center", cap->center}, {"angular_radius", cap->angular_radius}};
  else if (const auto* pts = std::get_if<PointsDescriptor>(&set.descriptor()))
    out["points"] = pts->points;
  return out;
}

inline NodeSet node_set_from_json(const json& j, const GridPtr& grid) {
  if (j.contains("cap"))
    return node_set_from_cap(grid, j.at("cap").at("center").get<std::vector<double>>(),
                             j.at("cap").at("angular_radius").get<double>());
  if (j.contains("points"))
    return node_set_from_points(
        grid, j.at("points").get<std::vector<std::vector<double>>>());
  return node_set_from_indices(grid, j.at("indices").get<std::vector<std::uint32_t>>());
}

inline std::string rim_rows_csv(const std::vector<RimDecayRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "omega,sup_abs_V,band_measure\n";
  for (const RimDecayRow& r : rows)
    out << r.omega << ',' << r.sup_abs_value << ',' << r.band_measure << '\n';
  return out.str();
}

inline json rim_rows_to_json(const std::vector<RimDecayRow>& rows) {
  json table = json::array();
  for (const RimDecayRow& r : rows)
    table.push_back({{"omega", r.omega},
                     {"sup_abs_V", r.sup_abs_value},
                     {"band_measure", r.band_measure}});
  return table;
}

inline std::string oracle_rows_csv(const std::vector<OracleAgreementRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "trial,N,L,disagreement,bound\n";
  for (const OracleAgreementRow& r : rows)
    out << r.trial << ',' << r.grid_size << ',' << r.levels << ','
        << r.disagreement << ',' << r.bound << '\n';
  return out.str();
}

inline json oracle_rows_to_json(const std::vector<OracleAgreementRow>& rows) {
  json table = json::array();
  for (const OracleAgreementRow& r : rows)
    table.push_back({{"trial", r.trial},
                     {"N", r.grid_size},
                     {"L", r.levels},
                     {"disagreement", r.disagreement},
                     {"bound", r.bound},
                     {"within_bound", r.within_bound}});
  return table;
}

inline json continuity_table_to_json(const std::vector<ContinuityRow>& rows) {
  json table = json::array();
  for (const ContinuityRow& r : rows)
    table.push_back({{"delta", r.delta}, {"observed_sup", r.observed_sup}});
  return table;
}

}  // namespace starval
