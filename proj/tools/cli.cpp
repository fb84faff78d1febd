#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>

#include "bdlab/error.hpp"
#include "bdlab/expression.hpp"
#include "bdlab/functional.hpp"
#include "bdlab/json_io.hpp"
#include "bdlab/measure.hpp"
#include "bdlab/quasiconvexity.hpp"
#include "bdlab/rigidity2d.hpp"
#include "bdlab/young_measure.hpp"

namespace bdlab::cli {

namespace {

using io::json;

struct Outcome {
  json report;
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
  bool fail = false;
  /// Extra documents written next to the report when --out is given.
  std::map<std::string, json> documents;
};

RecessionMode parse_mode(const std::string& s) {
  if (s == "strong") return RecessionMode::Strong;
  if (s == "upper_sharp") return RecessionMode::UpperSharp;
  if (s == "lower_flat") return RecessionMode::LowerFlat;
  throw InputError("unknown recession mode '" + s + "'");
}

SymMatrix parse_matrix(const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  return io::matrix_from_json(io::parse(text));
}

Vec parse_vector(const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  return io::vector_from_json(io::parse(text));
}

Integrand require_integrand(const RunConfig& cfg, int dim) {
  if (cfg.integrand.empty()) throw InputError("--integrand is required");
  return parse_integrand(cfg.integrand, dim);
}

std::function<double(double)> scalar_1d(const std::string& text) {
  auto fn = parse_scalar_function(text.empty() ? "0" : text, 1);
  return [fn](double t) {
    const double x[1] = {t};
    return fn(x);
  };
}

DisplacementField staircase_field(const Grid& grid) {
  const double lo0 = grid.lo(0), hi0 = grid.hi(0), lo1 = grid.lo(1), hi1 = grid.hi(1);
  if (!(lo0 < 0 && hi0 > 0 && lo1 < 0 && hi1 > 0)) throw InputError("the staircase needs a box containing the origin");
  std::vector<JumpInterface> jumps{JumpInterface::polyline({{hi0, 0.0}, {lo0, 0.0}}, {1.0, 0.0}),
                                   JumpInterface::polyline({{0.0, lo1}, {0.0, hi1}}, {0.0, 1.0})};
  return sample_field(
      grid, [](std::span<const double> x) { return Vec{x[1] > 0 ? 1.0 : 0.0, x[0] > 0 ? 1.0 : 0.0}; }, jumps);
}

DisplacementField step_field(const Grid& grid) {
  std::vector<JumpInterface> jumps{JumpInterface::polyline({{0.0, grid.lo(1)}, {0.0, grid.hi(1)}}, {0.0, 1.0})};
  return sample_field(grid, [](std::span<const double> x) { return Vec{0.0, x[0] > 0 ? 1.0 : 0.0}; }, jumps);
}

// "builtin:staircase" on (-1, 1)^2 or a field JSON file.
DisplacementField load_field(const RunConfig& cfg, int default_n) {
  if (cfg.field.empty()) throw InputError("--field is required");
  if (cfg.field == "builtin:staircase") return staircase_field(Grid::cube(2, -1.0, 1.0, cfg.grid.value_or(default_n)));
  if (cfg.field.rfind("builtin:", 0) == 0) throw InputError("unknown builtin field '" + cfg.field + "'");
  return io::field_from_json(io::read_file(cfg.field));
}

json verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

Outcome run_classify(const RunConfig& cfg) {
  const SymMatrix M = parse_matrix(cfg.matrix, "--matrix");
  const double tol = cfg.tol.value_or(kDefaultDyadTol);
  Outcome o;
  o.report["matrix"] = io::matrix_to_json(M);
  o.report["dyad"] = io::dyad_to_json(classify_dyad(M, tol));
  if (M.dim() == 2) o.report["inclusion"] = io::inclusion_to_json(classify_inclusion(M, tol));
  return o;
}

Outcome run_rigidity(const RunConfig& cfg) {
  const SymMatrix P = parse_matrix(cfg.matrix, "--matrix");
  if (P.dim() != 2) throw InputError("rigidity needs a 2x2 matrix");
  const Grid grid = Grid::cube(2, 0.0, 1.0, cfg.grid.value_or(65));
  const InclusionCase ic = classify_inclusion(P);
  Outcome o;
  o.report["case"] = io::inclusion_to_json(ic);
  DisplacementField u = DisplacementField::zero(grid);
  switch (ic.tag) {
    case InclusionTag::Trivial:
      o.report["residual"] = 0.0;
      break;
    case InclusionTag::OppositeSign: {
      const Vec a = *ic.dyad.a, b = *ic.dyad.b;
      const auto h1 = Profile1D::over_projection(scalar_1d(cfg.h1), grid, {a[0], a[1]});
      const auto h2 = Profile1D::over_projection(scalar_1d(cfg.h2), grid, {b[0], b[1]});
      RigiditySolution s = solve_opposite_sign(P, h1, h2, grid);
      o.report["residual"] = io::number(s.residual);
      u = std::move(s.u);
      break;
    }
    case InclusionTag::Degenerate: {
      const std::array<double, 2> q = ic.Q[0];
      const auto h = Profile1D::over_projection(scalar_1d(cfg.h), grid, q);
      const auto p = Profile1D::over_projection(scalar_1d(cfg.p), grid, q);
      RigiditySolution s = solve_degenerate(P, h, p, grid);
      o.report["residual"] = io::number(s.residual);
      u = std::move(s.u);
      break;
    }
    case InclusionTag::Elliptic: {
      if (cfg.g.empty()) throw InputError("--g is required for same-sign matrices");
      const auto gfn = parse_scalar_function(cfg.g, 2);
      std::vector<double> g(grid.node_count());
      for (std::size_t n = 0; n < grid.node_count(); ++n) g[n] = gfn(grid.node_position(n));
      try {
        EllipticSolution s = solve_elliptic(P, grid, g);
        o.report["residual_pde"] = io::number(s.residual_pde);
        o.report["residual"] = io::number(s.residual_incl);
        o.report["tolerance"] = io::number(s.tolerance);
        u = std::move(s.u);
      } catch (const NotSolvable& e) {
        o.report["residual_pde"] = io::number(e.residual());
        o.report["message"] = e.what();
        o.report["verdict"] = "FAIL";
        o.fail = true;
        return o;
      }
      break;
    }
  }
  o.report["verdict"] = "PASS";
  o.documents["rigidity_field"] = io::field_to_json(u);
  return o;
}

Outcome run_qc_test(const RunConfig& cfg) {
  const Integrand h = require_integrand(cfg, 2);
  const SymMatrix A = parse_matrix(cfg.at, "--at");
  CellProblemOptions opts;
  opts.iters = cfg.iters;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  if (cfg.tol) opts.tol_factor = *cfg.tol;
  const CellProblemResult r = cell_problem_min(h, A, Grid::cube(2, 0.0, 1.0, cfg.grid.value_or(33)), opts);
  Outcome o;
  o.report = io::cell_problem_to_json(r);
  o.report["at"] = io::matrix_to_json(A);
  o.csv_header = {"h_at_A", "min_mean", "tolerance", "violation"};
  o.csv_rows = {{r.h_at_A, r.min_mean, r.tolerance, r.violation ? 1.0 : 0.0}};
  o.fail = r.violation;
  return o;
}

FunctionalOptions functional_options(const RunConfig& cfg) {
  FunctionalOptions opts;
  opts.include_boundary = !cfg.no_boundary;
  opts.recession_mode = parse_mode(cfg.mode);
  if (cfg.tol) opts.recession.tol = *cfg.tol;
  return opts;
}

Outcome run_evaluate(const RunConfig& cfg) {
  const DisplacementField u = load_field(cfg, 65);
  const Integrand f = require_integrand(cfg, u.dim());
  const FunctionalBreakdown b = evaluate_functional(f, u, functional_options(cfg));
  Outcome o;
  o.report = io::breakdown_to_json(b);
  o.csv_header = {"bulk", "singular", "boundary", "total"};
  o.csv_rows = {{b.bulk, b.singular, b.boundary, b.total}};
  return o;
}

Outcome run_minimize(const RunConfig& cfg) {
  const Integrand f = require_integrand(cfg, 2);
  const Grid grid = Grid::cube(2, 0.0, 1.0, cfg.grid.value_or(17));
  MinimizeOptions opts;
  opts.functional = functional_options(cfg);
  opts.seed = cfg.seed;
  if (!cfg.dirichlet.empty()) {
    if (cfg.dirichlet.size() != 2) throw InputError("--dirichlet takes one expression per component");
    const auto g1 = parse_scalar_function(cfg.dirichlet[0], 2), g2 = parse_scalar_function(cfg.dirichlet[1], 2);
    opts.functional.dirichlet = [g1, g2](std::span<const double> x) { return Vec{g1(x), g2(x)}; };
  }
  const MinimizeResult r = minimize_functional(f, grid, opts);
  Outcome o;
  o.report = io::breakdown_to_json(r.breakdown);
  o.report["best_start"] = r.best_start;
  o.report["stagnated"] = r.stagnated;
  o.csv_header = {"bulk", "singular", "boundary", "total"};
  o.csv_rows = {{r.breakdown.bulk, r.breakdown.singular, r.breakdown.boundary, r.breakdown.total}};
  o.documents["minimize_field"] = io::field_to_json(r.u);
  return o;
}

Outcome run_lsc_demo(const RunConfig& cfg) {
  const Integrand f = require_integrand(cfg, 2);
  const Grid grid = Grid::cube(2, -1.0, 1.0, cfg.grid.value_or(129));
  SequenceSpec seq;
  if (cfg.kind == "laminate") seq.kind = SequenceKind::Laminate;
  else if (cfg.kind == "concentration") seq.kind = SequenceKind::Concentration;
  else if (cfg.kind == "mollification") seq.kind = SequenceKind::Mollification;
  else throw InputError("unknown sequence kind '" + cfg.kind + "'");
  if (cfg.profile == "sawtooth") seq.profile = Profile::Sawtooth;
  else if (cfg.profile == "sine") seq.profile = Profile::Sine;
  else throw InputError("unknown profile '" + cfg.profile + "'");
  seq.a = parse_vector(cfg.a, "--a");
  seq.b = parse_vector(cfg.b, "--b");
  seq.amplitude = cfg.amplitude;
  seq.offset = cfg.offset;
  seq.js = cfg.js;
  if (!cfg.base.empty()) {
    const json rows = io::parse(cfg.base);
    if (!rows.is_array() || rows.size() != 2) throw InputError("--base must be a 2x2 array of rows");
    const Vec r0 = io::vector_from_json(rows[0]), r1 = io::vector_from_json(rows[1]);
    if (r0.size() != 2 || r1.size() != 2) throw InputError("--base must be a 2x2 array of rows");
    seq.base = sample_field(grid, [&](std::span<const double> x) {
      return Vec{r0[0] * x[0] + r0[1] * x[1], r1[0] * x[0] + r1[1] * x[1]};
    });
  } else if (!cfg.field.empty()) {
    seq.base = load_field(cfg, 129);
  } else {
    seq.base = DisplacementField::zero(grid);
  }
  FunctionalOptions opts = functional_options(cfg);
  opts.include_boundary = false;
  const LscReport r = lsc_experiment(f, seq, opts);
  Outcome o;
  o.report = io::lsc_to_json(r);
  o.report["sequence"] = std::string(to_string(seq.kind));
  o.csv_header = {"j", "F_uj", "area_uj"};
  for (std::size_t i = 0; i < r.js.size(); ++i) o.csv_rows.push_back({double(r.js[i]), r.values[i], r.areas[i]});
  o.fail = !r.pass;
  return o;
}

Outcome run_strict_demo(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (c.field.empty()) c.field = "builtin:staircase";
  const DisplacementField u = load_field(c, 401);
  const Integrand f = parse_integrand(cfg.integrand.empty() ? "sqrt(1 + normsq(A))" : cfg.integrand, u.dim());
  FunctionalOptions opts = functional_options(cfg);
  opts.include_boundary = false;
  const StrictContinuityReport r = strict_continuity_experiment(f, u, cfg.deltas, opts);
  Outcome o;
  o.report = io::strict_to_json(r);
  const double last = r.rows.empty() ? 0.0 : r.rows.back().value_gap;
  const bool pass = r.monotone && last <= 0.05 * std::abs(r.value_limit);
  o.report["verdict"] = verdict(pass);
  o.csv_header = {"delta", "area", "value", "area_gap", "value_gap"};
  for (const auto& row : r.rows) o.csv_rows.push_back({row.delta, row.area, row.value, row.area_gap, row.value_gap});
  o.fail = !pass;
  return o;
}

Outcome run_jensen(const RunConfig& cfg) {
  const Integrand h = require_integrand(cfg, 2);
  YoungMeasure nu;
  if (cfg.ym == "laminate") {
    nu = laminate_ym(Grid::cube(2, 0.0, 1.0, cfg.grid.value_or(9)), parse_matrix(cfg.plus, "--plus"),
                     parse_matrix(cfg.minus, "--minus"), cfg.theta);
  } else if (cfg.ym == "elementary") {
    nu = elementary_ym(assemble_symmetrized_measure(load_field(cfg, 65)));
  } else {
    throw InputError("unknown Young measure kind '" + cfg.ym + "'");
  }
  JensenSite site;
  if (cfg.site == "regular") site.kind = JensenSite::Kind::Regular;
  else if (cfg.site == "singular") site.kind = JensenSite::Kind::Singular;
  else throw InputError("unknown site '" + cfg.site + "'");
  site.index = cfg.index;
  const JensenReport r = jensen_check(nu, h, site, cfg.tol.value_or(1e-9));
  Outcome o;
  o.report = io::jensen_to_json(r);
  o.csv_header = {"lhs", "rhs", "gap", "holds"};
  o.csv_rows = {{r.lhs, r.rhs, r.gap, r.holds ? 1.0 : 0.0}};
  o.fail = !r.holds;
  return o;
}

Outcome run_staircase(const RunConfig& cfg) {
  DisplacementField v;
  Vec a{1.0, 0.0}, b{0.0, 1.0};
  double q1 = cfg.q1, q2 = cfg.q2;
  const Grid cell = Grid::cube(2, -0.5, 0.5, cfg.grid.value_or(33));
  if (!cfg.field.empty()) {
    v = io::field_from_json(io::read_file(cfg.field));
    a = parse_vector(cfg.a, "--a");
    b = parse_vector(cfg.b, "--b");
  } else if (cfg.cell == "staircase") {
    v = staircase_field(cell);
    q1 = q2 = 1.0;
  } else if (cfg.cell == "step") {
    v = step_field(cell);
    q1 = 1.0;
    q2 = 0.0;
  } else {
    throw InputError("unknown cell '" + cfg.cell + "'");
  }
  Outcome o;
  json rows = json::array();
  bool pass = true;
  double prev = 0.0;
  o.csv_header = {"n", "dist_to_affine", "gluing_mass"};
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const StaircaseResult s = staircase_average(v, a, b, q1, q2, cfg.ns[i], cfg.tol.value_or(1e-9));
    rows.push_back({{"n", cfg.ns[i]}, {"dist_to_affine", io::number(s.dist_to_affine)},
                    {"gluing_mass", io::number(s.gluing_mass)}});
    o.csv_rows.push_back({double(cfg.ns[i]), s.dist_to_affine, s.gluing_mass});
    pass = pass && s.gluing_mass < 1e-12;
    if (i > 0 && cfg.ns[i] == 2 * cfg.ns[i - 1]) {
      const double ratio = s.dist_to_affine / prev;
      pass = pass && ratio >= 0.4 && ratio <= 0.6;
    }
    prev = s.dist_to_affine;
    if (i + 1 == cfg.ns.size()) o.report["target"] = io::matrix_to_json(s.target);
  }
  o.report["q1"] = io::number(q1);
  o.report["q2"] = io::number(q2);
  o.report["trajectory"] = rows;
  o.report["verdict"] = verdict(pass);
  o.fail = !pass;
  return o;
}

Outcome run_doubling(const RunConfig& cfg) {
  SymMeasure mu;
  if (!cfg.measure.empty()) {
    mu = io::measure_from_json(io::read_file(cfg.measure));
  } else {
    const Grid grid = Grid::cube(2, -1.0, 1.0, cfg.grid.value_or(65));
    const SymMatrix P = sym_dyad(Vec{1.0, 0.0}, Vec{0.0, 1.0});
    if (cfg.measure_kind == "lebesgue") {
      mu = SymMeasure::uniform(grid, SymMatrix::identity(2));
    } else if (cfg.measure_kind == "line") {
      mu = SymMeasure::zero(grid);
      mu.surface.push_back({make_piece({{-1.0, 0.0}, {1.0, 0.0}}), P, -1});
    } else if (cfg.measure_kind == "dirac") {
      mu = SymMeasure::zero(grid);
      mu.points.push_back({{0.0, 0.0}, P});
    } else {
      throw InputError("unknown measure kind '" + cfg.measure_kind + "'");
    }
  }
  const Vec x0 = parse_vector(cfg.x0, "--x0");
  const DoublingScan s = doubling_scan(mu, x0, cfg.t, cfg.radii);
  Outcome o;
  o.report = io::doubling_to_json(s);
  o.report["t"] = io::number(cfg.t);
  o.csv_header = {"r", "ratio"};
  for (std::size_t i = 0; i < s.radii.size(); ++i) o.csv_rows.push_back({s.radii[i], s.ratios[i]});
  return o;
}

void emit(const RunConfig& cfg, const Outcome& o, std::ostream& out) {
  out << o.report.dump(2) << '\n';
  if (cfg.out.empty()) return;
  std::filesystem::create_directories(cfg.out);
  const std::filesystem::path dir(cfg.out);
  std::string stem = cfg.subcommand;
  std::replace(stem.begin(), stem.end(), '-', '_');
  io::write_file((dir / (stem + ".json")).string(), o.report);
  if (!o.csv_header.empty()) io::write_csv((dir / (stem + ".csv")).string(), o.csv_header, o.csv_rows);
  for (const auto& [name, doc] : o.documents) io::write_file((dir / (name + ".json")).string(), doc);
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, Outcome (*)(const RunConfig&)> table = {
      {"classify", run_classify},     {"rigidity", run_rigidity},       {"qc-test", run_qc_test},
      {"evaluate", run_evaluate},     {"minimize", run_minimize},       {"lsc-demo", run_lsc_demo},
      {"strict-demo", run_strict_demo}, {"jensen", run_jensen},         {"staircase", run_staircase},
      {"doubling", run_doubling}};
  const auto it = table.find(cfg.subcommand);
  if (it == table.end()) {
    err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
    return kExitInputError;
  }
  try {
    const Outcome o = it->second(cfg);
    emit(cfg, o, out);
    return o.fail ? kExitVerdictFail : kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical laboratory for symmetric-gradient (BD) functionals"};
  app.name("bdlab");
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--tol", cfg.tol, "Tolerance override");
    sub->add_option("--out", cfg.out, "Directory for JSON and CSV reports");
    sub->add_option("--threads", cfg.threads, "Upper bound on worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "Nodes per axis")->check(CLI::Range(3, 1 << 14));
  };
  const auto integrand = [&](CLI::App* sub) {
    sub->add_option("--integrand", cfg.integrand, "Integrand expression in A (and x[1], x[2])");
  };
  const auto field = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "Field JSON file or builtin:staircase");
  };

  auto* classify = app.add_subcommand("classify", "Symmetric tensor product test and inclusion case of a matrix");
  classify->add_option("--matrix", cfg.matrix, "Symmetric matrix as JSON rows")->required();
  common(classify);

  auto* rigidity = app.add_subcommand("rigidity", "Solve the differential inclusion Eu in span{P} on the unit square");
  rigidity->add_option("--matrix", cfg.matrix, "2x2 matrix P as JSON rows")->required();
  rigidity->add_option("--h1", cfg.h1, "Profile h1(t) in x[1] (opposite-sign case)");
  rigidity->add_option("--h2", cfg.h2, "Profile h2(t) in x[1] (opposite-sign case)");
  rigidity->add_option("--h-profile", cfg.h, "Profile h(t) in x[1] (degenerate case)");
  rigidity->add_option("--p-profile", cfg.p, "Profile p(t) in x[1] (degenerate case)");
  rigidity->add_option("--g", cfg.g, "g(x[1], x[2]) (same-sign case)");
  common(rigidity);

  auto* qc = app.add_subcommand("qc-test", "Periodic cell search for a symmetric-quasiconvexity violation");
  integrand(qc);
  qc->add_option("--at", cfg.at, "Matrix A as JSON rows")->required();
  qc->add_option("--iters", cfg.iters, "Descent iterations per start");
  common(qc);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate the linear-growth functional with bulk, jump and boundary terms");
  integrand(evaluate);
  field(evaluate);
  evaluate->add_flag("--no-boundary", cfg.no_boundary, "Drop the boundary term");
  evaluate->add_option("--mode", cfg.mode, "Recession mode: strong, upper_sharp or lower_flat");
  common(evaluate);

  auto* minimize = app.add_subcommand("minimize", "Direct-method minimization of the relaxed functional on the unit square");
  integrand(minimize);
  minimize->add_option("--dirichlet", cfg.dirichlet, "Boundary data, one expression per component")->expected(2);
  minimize->add_flag("--no-boundary", cfg.no_boundary, "Drop the boundary term");
  minimize->add_option("--mode", cfg.mode, "Recession mode");
  common(minimize);

  auto* lsc = app.add_subcommand("lsc-demo", "Lower semicontinuity along a weak* converging sequence (boundary term excluded)");
  integrand(lsc);
  field(lsc);
  lsc->add_option("--kind", cfg.kind, "laminate, concentration or mollification");
  lsc->add_option("--a", cfg.a, "Direction a as JSON");
  lsc->add_option("--b", cfg.b, "Direction b as JSON");
  lsc->add_option("--base", cfg.base, "Base field B x with B a 2x2 array of rows");
  lsc->add_option("--amplitude", cfg.amplitude, "Sequence amplitude");
  lsc->add_option("--offset", cfg.offset, "Concentration offset");
  lsc->add_option("--profile", cfg.profile, "sawtooth or sine");
  lsc->add_option("--js", cfg.js, "Sequence indices")->delimiter(',');
  lsc->add_option("--mode", cfg.mode, "Recession mode");
  common(lsc);

  auto* strict = app.add_subcommand("strict-demo", "Reshetnyak strict-continuity experiment under mollification (boundary term excluded)");
  integrand(strict);
  field(strict);
  strict->add_option("--deltas", cfg.deltas, "Decreasing mollification radii")->delimiter(',');
  common(strict);

  auto* jensen = app.add_subcommand("jensen", "Jensen-type inequalities for generalized Young measures");
  integrand(jensen);
  field(jensen);
  jensen->add_option("--ym", cfg.ym, "laminate or elementary");
  jensen->add_option("--plus", cfg.plus, "Laminate state A+");
  jensen->add_option("--minus", cfg.minus, "Laminate state A-");
  jensen->add_option("--theta", cfg.theta, "Laminate weight of A+");
  jensen->add_option("--site", cfg.site, "regular or singular");
  jensen->add_option("--index", cfg.index, "Cell or concentration atom index");
  common(jensen);

  auto* staircase = app.add_subcommand("staircase", "Staircase averaging of a periodic cell construction");
  field(staircase);
  staircase->add_option("--cell", cfg.cell, "staircase or step (ignored with --field)");
  staircase->add_option("--a", cfg.a, "Face normal a (with --field)");
  staircase->add_option("--b", cfg.b, "Face normal b (with --field)");
  staircase->add_option("--q1", cfg.q1, "Trace offset across the a-faces (with --field)");
  staircase->add_option("--q2", cfg.q2, "Trace offset across the b-faces (with --field)");
  staircase->add_option("--ns", cfg.ns, "Tile counts")->delimiter(',');
  common(staircase);

  auto* doubling = app.add_subcommand("doubling", "Doubling-ratio scan used for tangent-measure existence");
  doubling->add_option("--measure", cfg.measure, "Measure JSON file");
  doubling->add_option("--kind", cfg.measure_kind, "lebesgue, line or dirac (without --measure)");
  doubling->add_option("--x0", cfg.x0, "Centre as JSON");
  doubling->add_option("--t", cfg.t, "Scale factor t > 1");
  doubling->add_option("--radii", cfg.radii, "Decreasing radii")->delimiter(',');
  common(doubling);

  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown subcommand '" << args.front() << "'\n";
    return kExitInputError;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return dispatch(cfg, out, err);
}

}  // namespace bdlab::cli
