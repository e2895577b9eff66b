// starval: command-line front end for valuations on star bodies.
//
// Subcommands: grid, body, eval, decompose, check, rims, split.
// Every run is reproducible from its flags: randomized commands take --seed
// (or STARVAL_SEED, default 0) and reports never contain wall-clock data.
// Exit codes: 0 success, 1 property/domain failure, 2 usage error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "starval/starval.hpp"

namespace sv = starval;
using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split_list(s, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const std::string& tok : split_list(s, ',')) out.push_back(std::stoll(tok));
  return out;
}

struct BodyDescriptor {
  std::string text;
  sv::BodyGenerator make(int dim, double floor, double rotate_angle) const {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    sv::BodyGenerator gen = sv::make_origin(dim);
    if (name == "origin") {
    } else if (name == "ball") {
      gen = sv::make_ball(dim, std::stod(args));
    } else if (name == "ellipsoid") {
      auto axes = parse_doubles(args);
      if (static_cast<int>(axes.size()) != dim)
        throw std::invalid_argument("ellipsoid axis count must match grid dim");
      gen = sv::make_ellipsoid(std::move(axes));
    } else if (name == "trigblob") {
      if (dim != 2)
        throw std::invalid_argument("trigblob descriptor is for 2-d grids");
      auto c = parse_doubles(args);
      if (c.empty()) throw std::invalid_argument("trigblob wants trigblob:c0[,a1,b1,...]");
      std::vector<sv::TrigTerm2> terms;
      for (std::size_t i = 1; i < c.size(); i += 2)
        terms.push_back({static_cast<int>((i + 1) / 2), c[i],
                         i + 1 < c.size() ? c[i + 1] : 0.0});
      gen = sv::make_trigblob2(c[0], std::move(terms), floor);
    } else {
      throw std::invalid_argument("unknown body descriptor: " + text);
    }
    if (rotate_angle != 0.0) {
      if (dim != 2)
        throw std::invalid_argument("--rotate applies to 2-d grids only");
      gen = sv::rotate(gen, sv::rotation2d(rotate_angle));
    }
    return gen;
  }
};

sv::ThetaCurve parse_theta(const std::string& desc, double domain_max) {
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : desc.substr(colon + 1);
  if (name == "power") return sv::make_power_curve(std::stod(args), domain_max, 1.0);
  if (name == "neg-power")
    return sv::make_power_curve(std::stod(args), domain_max, -1.0);
  if (name == "sine") {
    auto p = parse_doubles(args);
    if (p.size() != 2) throw std::invalid_argument("sine wants sine:frequency,amplitude");
    return sv::make_sine_curve(p[0], p[1], domain_max);
  }
  if (name == "poly") return sv::make_polynomial_curve(parse_doubles(args), domain_max);
  if (name == "pl") {
    std::vector<double> xs, ys;
    for (const std::string& node : split_list(args, ';')) {
      auto p = parse_doubles(node);
      if (p.size() != 2) throw std::invalid_argument("pl wants pl:x,y;x,y;...");
      xs.push_back(p[0]);
      ys.push_back(p[1]);
    }
    return sv::make_piecewise_linear_curve(std::move(xs), std::move(ys));
  }
  throw std::invalid_argument("unknown theta descriptor: " + desc);
}

bool theta_is_piecewise(const std::string& desc) {
  return desc.rfind("pl:", 0) == 0;
}

double piecewise_domain(const std::string& desc) {
  const auto nodes = split_list(desc.substr(3), ';');
  return parse_doubles(nodes.back()).at(0);
}

/// Domain rule: explicit --domain wins; piecewise curves carry their own
/// domain; closed forms default to max(1, largest body value in the run).
double resolve_domain(const std::string& theta_desc,
                      const std::optional<double>& explicit_domain, double needed) {
  if (theta_is_piecewise(theta_desc)) {
    const double d = piecewise_domain(theta_desc);
    if (explicit_domain && *explicit_domain != d)
      throw std::invalid_argument("--domain conflicts with the pl curve's last node");
    return d;
  }
  if (explicit_domain) return *explicit_domain;
  return std::max(1.0, needed);
}

sv::NodeSet parse_base_set(const std::string& desc, const sv::GridPtr& grid) {
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : desc.substr(colon + 1);
  if (name == "node")
    return sv::node_set_single_node(grid, static_cast<std::uint32_t>(std::stoul(args)));
  if (name == "arc") {
    auto p = parse_doubles(args);
    if (p.size() != 2 || grid->dim != 2)
      throw std::invalid_argument("arc wants arc:center_angle,radius on a 2-d grid");
    return sv::node_set_from_cap(grid, {std::cos(p[0]), std::sin(p[0])}, p[1]);
  }
  if (name == "cap") {
    auto p = parse_doubles(args);
    if (static_cast<int>(p.size()) != grid->dim + 1)
      throw std::invalid_argument("cap wants cap:x,...,radius matching the grid dim");
    const double radius = p.back();
    p.pop_back();
    return sv::node_set_from_cap(grid, std::move(p), radius);
  }
  throw std::invalid_argument("unknown set descriptor: " + desc);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path)
    write_text(*path, text);
  else
    std::cout << text;
}

void write_report(const std::optional<std::string>& path, const json& report) {
  if (path) write_text(*path, report.dump(2) + "\n");
}

/// JSON config files: top-level keys are long option names of the main app;
/// a nested object applies to the subcommand of that name. Explicit flags
/// override config values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    if (!j.is_object()) throw CLI::FileError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        for (const auto& [inner_key, inner_value] : value.items())
          items.push_back(make_item({key}, inner_key, inner_value));
      } else {
        items.push_back(make_item({}, key, value));
      }
    }
    return items;
  }

 private:
  static CLI::ConfigItem make_item(std::vector<std::string> parents,
                                   const std::string& name, const json& value) {
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = name;
    if (value.is_array())
      for (const auto& v : value) item.inputs.push_back(scalar_to_string(v));
    else
      item.inputs.push_back(scalar_to_string(value));
    return item;
  }
  static std::string scalar_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
};

struct CheckOutcome {
  bool pass = false;
  json result;
  json table;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valuations on star bodies: quadrature grids, radial functions, "
               "Jordan decomposition and property checks"};
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (keys = option names)");

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for every randomized routine")
      ->envname("STARVAL_SEED");
  std::string format = "json";
  app.add_option("--format", format, "output format for --out artifacts")
      ->check(CLI::IsMember({"json", "csv"}));

  // shared option storage
  std::string grid_desc = "circle:256";
  std::string theta_desc;
  std::optional<double> domain_opt;
  std::vector<std::string> body_descs;
  double floor_value = 0.0;
  double rotate_angle = 0.0;
  std::optional<std::string> out_path;
  std::optional<std::string> report_path;

  // ---- grid ----------------------------------------------------------------
  auto* cmd_grid = app.add_subcommand("grid", "construct a quadrature grid");
  cmd_grid->add_option("--grid", grid_desc, "circle:N | latlong:P,Q | montecarlo:n,N")
      ->required();
  cmd_grid->add_option("--out", out_path, "write grid JSON here (default stdout)");

  // ---- body ----------------------------------------------------------------
  auto* cmd_body = app.add_subcommand("body", "sample a closed-form body on a grid");
  cmd_body->add_option("--grid", grid_desc, "grid descriptor");
  cmd_body->add_option("--body", body_descs,
                       "origin | ball:r | ellipsoid:a,b[,c] | trigblob:c0[,a1,b1,...]")
      ->required();
  cmd_body->add_option("--floor", floor_value, "trigblob clamp floor");
  cmd_body->add_option("--rotate", rotate_angle, "rotate the generator (radians, 2-d)");
  bool emit_generator = false;
  cmd_body->add_flag("--generator", emit_generator, "emit the generator, not samples");
  cmd_body->add_option("--out", out_path, "output path (default stdout)");

  // ---- eval ----------------------------------------------------------------
  auto* cmd_eval = app.add_subcommand("eval", "evaluate V(K) for each body");
  cmd_eval->add_option("--theta", theta_desc,
                       "power:k | neg-power:k | sine:f,a | poly:c0,c1,... | pl:x,y;...")
      ->required();
  cmd_eval->add_option("--domain", domain_opt, "domain bound lambda_max");
  cmd_eval->add_option("--grid", grid_desc, "grid descriptor");
  cmd_eval->add_option("--body", body_descs, "body descriptor (repeatable)")->required();
  cmd_eval->add_option("--floor", floor_value, "trigblob clamp floor");
  cmd_eval->add_option("--rotate", rotate_angle, "rotate generators (radians, 2-d)");
  cmd_eval->add_option("--report", report_path, "write the JSON run record here");

  // ---- decompose -----------------------------------------------------------
  auto* cmd_dec = app.add_subcommand(
      "decompose", "split theta into running-max positive parts and verify");
  cmd_dec->add_option("--theta", theta_desc, "theta descriptor")->required();
  cmd_dec->add_option("--domain", domain_opt, "domain bound lambda_max");
  std::int64_t resolution = sv::kDefaultDecomposeResolution;
  cmd_dec->add_option("--resolution", resolution, "sampling density for closed forms");
  double csv_step = 0.0;
  cmd_dec->add_option("--step", csv_step, "lambda step of the CSV table");
  cmd_dec->add_option("--grid", grid_desc, "grid for the verification bodies");
  std::int64_t verify_bodies = 100;
  cmd_dec->add_option("--bodies", verify_bodies, "number of random verification bodies");
  std::string rot_steps_text;
  cmd_dec->add_option("--rot-steps", rot_steps_text,
                      "circle-grid rotation steps for the invariance check");
  double tol_recon = 1e-9, tol_pos = 1e-12, tol_inv = 1e-12;
  cmd_dec->add_option("--tol-recon", tol_recon, "reconstruction tolerance");
  cmd_dec->add_option("--tol-pos", tol_pos, "positivity tolerance");
  cmd_dec->add_option("--tol-inv", tol_inv, "invariance tolerance");
  cmd_dec->add_option("--out", out_path, "write the (lambda,theta,plus,minus) CSV here");
  cmd_dec->add_option("--report", report_path, "write the JSON report here");

  // ---- check ---------------------------------------------------------------
  auto* cmd_check = app.add_subcommand("check", "run a named property suite");
  std::string property;
  cmd_check->add_option("property", property, "which suite to run")
      ->required()
      ->check(CLI::IsMember({"identity", "invariance", "bounded", "continuity",
                             "rims", "oracle", "split"}));
  cmd_check->add_option("--theta", theta_desc, "theta descriptor");
  cmd_check->add_option("--domain", domain_opt, "domain bound lambda_max");
  cmd_check->add_option("--grid", grid_desc, "grid descriptor");
  std::int64_t pairs = 100;
  cmd_check->add_option("--pairs", pairs, "random body pairs (identity)");
  std::int64_t trials = 10000;
  cmd_check->add_option("--trials", trials, "random bodies (bounded) / trials (oracle)");
  std::int64_t probes = 32;
  cmd_check->add_option("--probes", probes, "probes per row (continuity, rims)");
  std::int64_t nodes = 6;
  cmd_check->add_option("--nodes", nodes, "circle grid size for the oracle suite");
  std::int64_t levels = 8;
  cmd_check->add_option("--levels", levels, "ladder levels for the oracle suite");
  std::uint64_t budget = 10'000'000;
  cmd_check->add_option("--budget", budget, "evaluation budget for exhaustive search");
  double lambda_bound = 2.0;
  cmd_check->add_option("--lambda", lambda_bound, "sup-norm bound (bounded, rims)");
  std::string body_model = "rough";
  cmd_check->add_option("--body-model", body_model, "random bodies for bounded")
      ->check(CLI::IsMember({"rough", "smooth"}));
  std::string deltas_text = "0.1,0.05,0.025,0.0125";
  cmd_check->add_option("--deltas", deltas_text, "perturbation radii (continuity)");
  std::string omegas_text = "1.0,0.5,0.25,0.125,0.0625";
  cmd_check->add_option("--omegas", omegas_text, "band widths (rims)");
  std::string base_desc = "node:0";
  cmd_check->add_option("--base", base_desc, "rim base: node:i | arc:c,r | cap:...");
  bool point_base = false;
  cmd_check->add_flag("--point-base", point_base, "shorthand for --base node:0");
  std::string covers_text =
      "arc:0,2;arc:3.141592653589793,2";
  cmd_check->add_option("--covers", covers_text, "cover sets for the split suite");
  std::string steps_text = "1,45,90,180";
  cmd_check->add_option("--steps", steps_text, "grid-step rotations (invariance)");
  cmd_check->add_option("--body", body_descs, "body descriptor (invariance, continuity)");
  cmd_check->add_option("--floor", floor_value, "trigblob clamp floor");
  cmd_check->add_option("--resolution", resolution, "decomposition sampling density");
  double tol_exact = 1e-12;
  cmd_check->add_option("--tol", tol_exact, "tolerance for exact-identity checks");
  cmd_check->add_option("--out", out_path, "write the table artifact here");
  cmd_check->add_option("--report", report_path, "write the JSON report here");

  // ---- rims ----------------------------------------------------------------
  auto* cmd_rims = app.add_subcommand("rims", "emit a rim-decay table");
  cmd_rims->add_option("--theta", theta_desc, "theta descriptor")->required();
  cmd_rims->add_option("--domain", domain_opt, "domain bound lambda_max");
  cmd_rims->add_option("--grid", grid_desc, "grid descriptor");
  cmd_rims->add_option("--lambda", lambda_bound, "bump height bound");
  cmd_rims->add_option("--omegas", omegas_text, "band widths, decreasing");
  cmd_rims->add_option("--base", base_desc, "rim base descriptor");
  cmd_rims->add_flag("--point-base", point_base, "shorthand for --base node:0");
  cmd_rims->add_option("--probes", probes, "random sub-bumps per width");
  cmd_rims->add_option("--out", out_path, "write the CSV table here (default stdout)");
  cmd_rims->add_option("--report", report_path, "write the JSON run record here");

  // ---- split ---------------------------------------------------------------
  auto* cmd_split = app.add_subcommand(
      "split", "partition of unity subordinate to covers, applied to a body");
  cmd_split->add_option("--grid", grid_desc, "grid descriptor");
  cmd_split->add_option("--covers", covers_text, "semicolon-separated cover sets")
      ->required();
  cmd_split->add_option("--body", body_descs, "body to split (default ball:1)");
  cmd_split->add_option("--floor", floor_value, "trigblob clamp floor");
  cmd_split->add_option("--out", out_path, "write the JSON artifact here");
  cmd_split->add_option("--report", report_path, "write the JSON run record here");

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 2;
  }

  try {
    // ---- grid --------------------------------------------------------------
    if (cmd_grid->parsed()) {
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      emit(out_path, sv::grid_to_json(*grid).dump(2) + "\n");
      return 0;
    }

    // ---- body --------------------------------------------------------------
    if (cmd_body->parsed()) {
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      const BodyDescriptor desc{body_descs.at(0)};
      const sv::BodyGenerator gen = desc.make(grid->dim, floor_value, rotate_angle);
      if (emit_generator) {
        emit(out_path, sv::generator_to_json(gen).dump(2) + "\n");
        return 0;
      }
      const sv::RadialFunction f = sv::sample(gen, grid);
      if (format == "csv")
        emit(out_path, sv::body_to_csv(f));
      else
        emit(out_path, sv::body_to_json(f).dump() + "\n");
      return 0;
    }

    // ---- eval --------------------------------------------------------------
    if (cmd_eval->parsed()) {
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      std::vector<sv::RadialFunction> bodies;
      double needed = 0.0;
      for (const std::string& b : body_descs) {
        bodies.push_back(
            sv::sample(BodyDescriptor{b}.make(grid->dim, floor_value, rotate_angle), grid));
        needed = std::max(needed, bodies.back().sup_norm());
      }
      const double domain = resolve_domain(theta_desc, domain_opt, needed);
      const sv::ValuationSpec spec =
          sv::make_theta_valuation(parse_theta(theta_desc, domain));
      json results = json::array();
      std::cout.precision(17);
      for (std::size_t i = 0; i < bodies.size(); ++i) {
        const double v = sv::evaluate(spec, bodies[i]);
        std::cout << v << "\n";
        results.push_back({{"body", body_descs[i]}, {"value", v}});
      }
      write_report(report_path, json{{"command", "eval"},
                                     {"params",
                                      {{"theta", theta_desc},
                                       {"domain", domain},
                                       {"grid", grid_desc},
                                       {"bodies", body_descs}}},
                                     {"seed", seed},
                                     {"results", results}});
      return 0;
    }

    // ---- decompose ---------------------------------------------------------
    if (cmd_dec->parsed()) {
      const double domain = resolve_domain(theta_desc, domain_opt, 1.0);
      const sv::ThetaCurve curve = parse_theta(theta_desc, domain);
      const sv::ValuationSpec spec = sv::make_theta_valuation(curve);
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      std::vector<sv::RadialFunction> bodies;
      bodies.push_back(sv::origin_body(grid));
      for (std::int64_t t = 0; t < verify_bodies; ++t) {
        sv::SplitMix64 rng(sv::split_seed(seed, static_cast<std::uint64_t>(t)));
        bodies.push_back(sv::random_radial_function(grid, domain, rng));
      }
      const std::vector<std::int64_t> rot_steps =
          rot_steps_text.empty() ? std::vector<std::int64_t>{} : parse_ints(rot_steps_text);
      const sv::DecompositionReport report =
          sv::verify_decomposition(spec, bodies, rot_steps, resolution);
      const sv::ThetaDecomposition dec{report.theta_plus, report.theta_minus,
                                       report.offset};
      if (csv_step <= 0.0) csv_step = domain / 512.0;
      if (out_path) write_text(*out_path, sv::theta_table_csv(curve, dec, csv_step));

      const bool pass = report.reconstruction_ok(tol_recon) &&
                        report.positivity_ok(tol_pos) && report.origin_ok() &&
                        report.invariance_ok(tol_inv);
      json j = sv::decomposition_report_to_json(report);
      j["flags"] = {{"reconstruction", report.reconstruction_ok(tol_recon)},
                    {"positivity", report.positivity_ok(tol_pos)},
                    {"origin", report.origin_ok()},
                    {"invariance", report.invariance_ok(tol_inv)}};
      write_report(report_path, json{{"command", "decompose"},
                                     {"params",
                                      {{"theta", theta_desc},
                                       {"domain", domain},
                                       {"grid", grid_desc},
                                       {"bodies", verify_bodies},
                                       {"resolution", resolution}}},
                                     {"seed", seed},
                                     {"result", j}});
      std::cout << (pass ? "[PASS]" : "[FAIL]") << " decompose theta=" << theta_desc
                << " residual=" << report.max_reconstruction_residual << "\n";
      return pass ? 0 : 1;
    }

    // ---- rims (table) --------------------------------------------------------
    if (cmd_rims->parsed()) {
      const double domain = resolve_domain(theta_desc, domain_opt, lambda_bound);
      const sv::ValuationSpec spec =
          sv::make_theta_valuation(parse_theta(theta_desc, domain));
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      const sv::NodeSet base =
          parse_base_set(point_base ? "node:0" : base_desc, grid);
      const auto rows = sv::rim_decay_profile(
          spec, base, lambda_bound, parse_doubles(omegas_text),
          static_cast<std::uint64_t>(probes), seed);
      emit(out_path, sv::rim_rows_csv(rows));
      write_report(report_path, json{{"command", "rims"},
                                     {"params",
                                      {{"theta", theta_desc},
                                       {"domain", domain},
                                       {"grid", grid_desc},
                                       {"lambda", lambda_bound},
                                       {"base", point_base ? "node:0" : base_desc},
                                       {"omegas", parse_doubles(omegas_text)},
                                       {"probes", probes}}},
                                     {"seed", seed},
                                     {"table", sv::rim_rows_to_json(rows)}});
      return 0;
    }

    // ---- split (artifact) ----------------------------------------------------
    if (cmd_split->parsed()) {
      const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
      std::vector<sv::NodeSet> covers;
      for (const std::string& c : split_list(covers_text, ';'))
        covers.push_back(parse_base_set(c, grid));
      const auto phis = sv::partition_of_unity(grid, covers);
      const std::string body_desc = body_descs.empty() ? "ball:1" : body_descs[0];
      const sv::RadialFunction f =
          sv::sample(BodyDescriptor{body_desc}.make(grid->dim, floor_value, 0.0), grid);
      const auto pieces = sv::split_function(f, phis);
      bool max_one = true, supports = true, recombines = true;
      for (std::size_t t = 0; t < grid->node_count(); ++t) {
        double mphi = 0.0, mpiece = 0.0;
        for (std::size_t i = 0; i < phis.size(); ++i) {
          mphi = std::max(mphi, phis[i][t]);
          mpiece = std::max(mpiece, pieces[i][t]);
          if (phis[i][t] > 0.0 && !covers[i].contains(t)) supports = false;
        }
        if (mphi != 1.0) max_one = false;
        if (mpiece != f[t]) recombines = false;
      }
      json artifact = {{"covers", split_list(covers_text, ';')},
                       {"body", body_desc},
                       {"phis", phis},
                       {"pieces", json::array()},
                       {"flags",
                        {{"max_phi_is_one", max_one},
                         {"supports_contained", supports},
                         {"recombines", recombines}}}};
      for (const auto& piece : pieces) artifact["pieces"].push_back(piece.values());
      emit(out_path, artifact.dump() + "\n");
      write_report(report_path, json{{"command", "split"},
                                     {"params",
                                      {{"grid", grid_desc},
                                       {"covers", covers_text},
                                       {"body", body_desc}}},
                                     {"seed", seed},
                                     {"result", artifact["flags"]}});
      return (max_one && supports && recombines) ? 0 : 1;
    }

    // ---- check -------------------------------------------------------------
    if (cmd_check->parsed()) {
      CheckOutcome outcome;
      json params = {{"grid", grid_desc}};
      std::string table_csv;

      if (property == "identity") {
        const double domain = resolve_domain(theta_desc, domain_opt, 1.0);
        const sv::ValuationSpec spec =
            sv::make_theta_valuation(parse_theta(theta_desc, domain));
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        double worst = 0.0;
        for (std::int64_t p = 0; p < pairs; ++p) {
          sv::SplitMix64 rng(sv::split_seed(seed, static_cast<std::uint64_t>(p)));
          const auto k = sv::random_radial_function(grid, domain, rng);
          const auto l = sv::random_radial_function(grid, domain, rng);
          const double scale =
              1.0 + std::abs(sv::evaluate(spec, k)) + std::abs(sv::evaluate(spec, l));
          worst = std::max(worst, std::abs(sv::valuation_residual(spec, k, l)) / scale);
        }
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["pairs"] = pairs;
        outcome.pass = worst <= tol_exact;
        outcome.result = {{"max_scaled_residual", worst}, {"tolerance", tol_exact}};
      } else if (property == "invariance") {
        const std::string body_desc = body_descs.empty() ? "ellipsoid:2,1" : body_descs[0];
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        const sv::BodyGenerator gen =
            BodyDescriptor{body_desc}.make(grid->dim, floor_value, 0.0);
        const double needed = sv::sample(gen, grid).sup_norm();
        const double domain = resolve_domain(theta_desc, domain_opt, needed);
        const sv::ThetaCurve curve = parse_theta(theta_desc, domain);
        const sv::ValuationSpec spec = sv::make_theta_valuation(curve);
        const sv::ThetaDecomposition dec = sv::decompose_theta(curve, resolution);
        std::vector<std::vector<double>> rotations;
        const auto n = grid->node_count();
        for (std::int64_t s : parse_ints(steps_text))
          rotations.push_back(
              sv::rotation2d(sv::kTwoPi * static_cast<double>(s) / static_cast<double>(n)));
        const double dv = sv::check_rotational_invariance(spec, gen, rotations, grid);
        const double dp = sv::check_rotational_invariance(
            sv::make_theta_valuation(dec.theta_plus), gen, rotations, grid);
        const double dm = sv::check_rotational_invariance(
            sv::make_theta_valuation(dec.theta_minus), gen, rotations, grid);
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["body"] = body_desc;
        params["steps"] = steps_text;
        outcome.pass = dv <= tol_exact && dp <= tol_exact && dm <= tol_exact;
        outcome.result = {{"deviation_V", dv},
                          {"deviation_Vplus", dp},
                          {"deviation_Vminus", dm},
                          {"tolerance", tol_exact}};
      } else if (property == "bounded") {
        const double domain = resolve_domain(theta_desc, domain_opt, lambda_bound);
        const sv::ValuationSpec spec =
            sv::make_theta_valuation(parse_theta(theta_desc, domain));
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        const auto report = sv::check_bounded_on_bounded(
            spec, grid, lambda_bound, static_cast<std::uint64_t>(trials), seed,
            body_model == "rough" ? sv::RandomBodyModel::rough
                                  : sv::RandomBodyModel::smooth);
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["lambda"] = lambda_bound;
        params["trials"] = trials;
        params["body_model"] = body_model;
        outcome.pass = report.analytic_bound &&
                       report.empirical_max <= *report.analytic_bound + 1e-12;
        outcome.result = {{"empirical_max", report.empirical_max},
                          {"analytic_bound", *report.analytic_bound}};
      } else if (property == "continuity") {
        const std::string body_desc = body_descs.empty() ? "ball:1" : body_descs[0];
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        const sv::BodyGenerator gen =
            BodyDescriptor{body_desc}.make(grid->dim, floor_value, 0.0);
        const sv::RadialFunction body = sv::sample(gen, grid);
        const auto deltas = parse_doubles(deltas_text);
        const double max_delta = deltas.empty() ? 0.0 : deltas.front();
        const double domain =
            resolve_domain(theta_desc, domain_opt, body.sup_norm() + max_delta);
        const sv::ThetaCurve curve = parse_theta(theta_desc, domain);
        const sv::ValuationSpec spec = sv::make_theta_valuation(curve);
        const auto table = sv::check_continuity(spec, body, deltas,
                                                static_cast<std::uint64_t>(probes), seed);
        const double lip = sv::lipschitz_constant(curve);
        outcome.pass = true;
        for (const auto& row : table)
          if (std::isfinite(lip) && row.observed_sup > lip * row.delta + 1e-12)
            outcome.pass = false;
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["body"] = body_desc;
        params["probes"] = probes;
        outcome.result = {{"lipschitz_bound", lip}};
        outcome.table = sv::continuity_table_to_json(table);
        std::ostringstream csv;
        csv.precision(17);
        csv << "delta,observed_sup\n";
        for (const auto& row : table) csv << row.delta << ',' << row.observed_sup << '\n';
        table_csv = csv.str();
      } else if (property == "rims") {
        const double domain = resolve_domain(theta_desc, domain_opt, lambda_bound);
        const sv::ThetaCurve curve = parse_theta(theta_desc, domain);
        const sv::ValuationSpec spec = sv::make_theta_valuation(curve);
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        const sv::NodeSet base =
            parse_base_set(point_base ? "node:0" : base_desc, grid);
        const auto rows = sv::rim_decay_profile(
            spec, base, lambda_bound, parse_doubles(omegas_text),
            static_cast<std::uint64_t>(probes), seed);
        const double offset = sv::eval_theta(curve, 0.0);
        double envelope_peak = 0.0;  // sup |theta - theta(0)| on [0, lambda]
        for (int i = 0; i <= 1000; ++i) {
          const double x = lambda_bound * (i / 1000.0);
          envelope_peak =
              std::max(envelope_peak, std::abs(sv::eval_theta(curve, x) - offset));
        }
        outcome.pass = !rows.empty();
        for (const auto& row : rows)
          if (row.sup_abs_value > envelope_peak * row.band_measure + 1e-15)
            outcome.pass = false;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
          if (rows[i + 1].band_measure > rows[i].band_measure) outcome.pass = false;
        if (rows.size() >= 2 &&
            !(rows.back().sup_abs_value < rows.front().sup_abs_value ||
              rows.front().sup_abs_value == 0.0))
          outcome.pass = false;
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["lambda"] = lambda_bound;
        params["base"] = point_base ? "node:0" : base_desc;
        params["probes"] = probes;
        outcome.result = {{"envelope_peak", envelope_peak}};
        outcome.table = sv::rim_rows_to_json(rows);
        table_csv = sv::rim_rows_csv(rows);
      } else if (property == "oracle") {
        const double domain = resolve_domain(theta_desc, domain_opt, 1.0);
        const sv::ValuationSpec spec =
            sv::make_theta_valuation(parse_theta(theta_desc, domain));
        const auto rows = sv::oracle_agreement(spec, {nodes}, static_cast<int>(levels),
                                               static_cast<std::uint64_t>(trials), seed,
                                               budget, resolution);
        outcome.pass = true;
        for (const auto& row : rows) outcome.pass = outcome.pass && row.within_bound;
        params["theta"] = theta_desc;
        params["domain"] = domain;
        params["nodes"] = nodes;
        params["levels"] = levels;
        params["trials"] = trials;
        outcome.result = {{"trials", rows.size()}};
        outcome.table = sv::oracle_rows_to_json(rows);
        table_csv = sv::oracle_rows_csv(rows);
      } else if (property == "split") {
        const sv::GridPtr grid = sv::grid_from_descriptor(grid_desc, seed);
        std::vector<sv::NodeSet> covers;
        for (const std::string& c : split_list(covers_text, ';'))
          covers.push_back(parse_base_set(c, grid));
        const auto phis = sv::partition_of_unity(grid, covers);
        bool in_union = true;
        for (std::size_t t = 0; t < grid->node_count(); ++t) {
          double m = 0.0;
          for (const auto& phi : phis) m = std::max(m, phi[t]);
          if (m != 1.0) in_union = false;
        }
        bool supports = true, recombines = true;
        const std::int64_t body_count = body_descs.empty() ? 20 : 0;
        std::vector<sv::RadialFunction> bodies;
        if (body_count == 0) {
          bodies.push_back(sv::sample(
              BodyDescriptor{body_descs[0]}.make(grid->dim, floor_value, 0.0), grid));
        } else {
          for (std::int64_t b = 0; b < body_count; ++b) {
            sv::SplitMix64 rng(sv::split_seed(seed, static_cast<std::uint64_t>(b)));
            bodies.push_back(sv::random_radial_function(grid, 1.0, rng));
          }
        }
        for (std::size_t i = 0; i < phis.size(); ++i)
          for (std::size_t t = 0; t < grid->node_count(); ++t)
            if (phis[i][t] > 0.0 && !covers[i].contains(t)) supports = false;
        for (const auto& f : bodies) {
          const auto pieces = sv::split_function(f, phis);
          for (std::size_t t = 0; t < f.size(); ++t) {
            double m = 0.0;
            for (const auto& piece : pieces) m = std::max(m, piece[t]);
            if (m != f[t]) recombines = false;
          }
        }
        params["covers"] = covers_text;
        params["bodies"] = bodies.size();
        outcome.pass = in_union && supports && recombines;
        outcome.result = {{"max_phi_is_one", in_union},
                          {"supports_contained", supports},
                          {"recombines", recombines}};
      }

      if (out_path && !table_csv.empty()) write_text(*out_path, table_csv);
      json report = {{"check", property},
                     {"params", params},
                     {"seed", seed},
                     {"result", outcome.result}};
      report["result"]["pass"] = outcome.pass;
      if (!outcome.table.is_null()) report["table"] = outcome.table;
      write_report(report_path, report);
      std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " check " << property << "\n";
      return outcome.pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
