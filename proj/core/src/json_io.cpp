#include "bdlab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bdlab/error.hpp"

namespace bdlab::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::stod(format_number(x));
}

json vector(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

namespace {

// Full precision for data documents; reports use number().
json exact(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json exact_matrix(const SymMatrix& m) {
  json out = json::array();
  for (const auto& row : m.rows()) out.push_back(exact(row));
  return out;
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

}  // namespace

json matrix_to_json(const SymMatrix& m) {
  json out = json::array();
  for (const auto& row : m.rows()) out.push_back(vector(row));
  return out;
}

Vec vector_from_json(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vec v;
  for (const auto& x : j) v.push_back(as_double(x, "vector entry"));
  return v;
}

SymMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("a matrix must be a non-empty array of rows");
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  return SymMatrix::from_rows(rows);
}

json dyad_to_json(const DyadClass& c) {
  json out;
  out["tag"] = std::string(to_string(c.tag));
  out["a"] = c.a ? vector(*c.a) : json(nullptr);
  out["b"] = c.b ? vector(*c.b) : json(nullptr);
  out["sign"] = c.sign ? json(*c.sign) : json(nullptr);
  return out;
}

json grid_to_json(const Grid& g) {
  return {{"box", {exact(g.lo()), exact(g.hi())}}, {"n", g.node_counts()}};
}

Grid grid_from_json(const json& j) {
  const json& box = member(j, "box");
  if (!box.is_array() || box.size() != 2) throw InputError("grid box must be [lo, hi]");
  const Vec lo = vector_from_json(box[0]), hi = vector_from_json(box[1]);
  if (lo.size() != hi.size() || lo.empty()) throw InputError("grid box corners must have equal non-zero dimension");
  const json& n = member(j, "n");
  std::vector<int> nodes;
  if (n.is_number_integer()) {
    nodes.assign(lo.size(), n.get<int>());
  } else if (n.is_array()) {
    for (const auto& k : n) {
      if (!k.is_number_integer()) throw InputError("grid node counts must be integers");
      nodes.push_back(k.get<int>());
    }
  } else {
    throw InputError("grid \"n\" must be an integer or an array of integers");
  }
  return Grid(lo, hi, nodes);
}

json field_to_json(const DisplacementField& u) {
  json out;
  out["grid"] = grid_to_json(u.grid());
  out["values"] = exact(u.values());
  json jumps = json::array();
  for (const auto& J : u.jumps()) {
    json verts = json::array();
    for (const auto& v : J.vertices) verts.push_back(exact(v));
    jumps.push_back({{u.dim() == 2 ? "polyline" : "polygon", verts}, {"jump", exact(J.jump)}});
  }
  out["jumps"] = jumps;
  return out;
}

DisplacementField field_from_json(const json& j) {
  const Grid g = grid_from_json(member(j, "grid"));
  const Vec values = vector_from_json(member(j, "values"));
  std::vector<JumpInterface> jumps;
  if (j.contains("jumps")) {
    for (const auto& J : j.at("jumps")) {
      const Vec jump = vector_from_json(member(J, "jump"));
      std::vector<Vec> verts;
      const bool poly = J.contains("polyline");
      const json& vs = poly ? J.at("polyline") : member(J, "polygon");
      for (const auto& v : vs) verts.push_back(vector_from_json(v));
      jumps.push_back(poly ? JumpInterface::polyline(std::move(verts), jump)
                           : JumpInterface::polygon(std::move(verts), jump));
    }
  }
  return DisplacementField(g, values, std::move(jumps));
}

json measure_to_json(const SymMeasure& mu) {
  json out;
  out["grid"] = grid_to_json(mu.grid);
  json dens = json::array();
  for (const auto& m : mu.density) dens.push_back(exact_matrix(m));
  out["density"] = dens;
  json surf = json::array();
  for (const auto& s : mu.surface) {
    json verts = json::array();
    for (const auto& v : s.piece.vertices) verts.push_back(exact(v));
    surf.push_back({{"vertices", verts}, {"normal", exact(s.piece.normal)}, {"amplitude", exact_matrix(s.amplitude)}});
  }
  out["surface"] = surf;
  json pts = json::array();
  for (const auto& p : mu.points) pts.push_back({{"location", exact(p.location)}, {"value", exact_matrix(p.value)}});
  out["points"] = pts;
  return out;
}

SymMeasure measure_from_json(const json& j) {
  SymMeasure mu = SymMeasure::zero(grid_from_json(member(j, "grid")));
  if (j.contains("density")) {
    const json& d = j.at("density");
    if (!d.is_array() || d.size() != mu.density.size()) throw InputError("density needs one matrix per cell");
    for (std::size_t c = 0; c < d.size(); ++c) mu.density[c] = matrix_from_json(d[c]);
  }
  if (j.contains("surface")) {
    for (const auto& s : j.at("surface")) {
      std::vector<Vec> verts;
      for (const auto& v : member(s, "vertices")) verts.push_back(vector_from_json(v));
      mu.surface.push_back({make_piece(std::move(verts)), matrix_from_json(member(s, "amplitude")), -1});
    }
  }
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) {
      mu.points.push_back({vector_from_json(member(p, "location")), matrix_from_json(member(p, "value"))});
    }
  }
  return mu;
}

namespace {

json atoms_to_json(const std::vector<WeightedMatrix>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back({{"weight", number(a.weight)}, {"value", matrix_to_json(a.value)}});
  return out;
}

}  // namespace

json young_measure_to_json(const YoungMeasure& nu) {
  json out;
  out["grid"] = grid_to_json(nu.grid);
  json osc = json::array(), sphere = json::array();
  for (const auto& o : nu.osc) osc.push_back(atoms_to_json(o));
  for (const auto& s : nu.conc_sphere) sphere.push_back(atoms_to_json(s));
  out["osc"] = osc;
  out["conc_density"] = vector(nu.conc_density);
  out["sphere"] = sphere;
  json atoms = json::array();
  for (const auto& a : nu.conc_atoms) {
    json ja{{"location", vector(a.location)}, {"mass", number(a.mass)}, {"sphere", atoms_to_json(a.sphere)}};
    if (a.piece) {
      json verts = json::array();
      for (const auto& v : a.piece->vertices) verts.push_back(vector(v));
      ja["vertices"] = verts;
    }
    atoms.push_back(ja);
  }
  out["conc_atoms"] = atoms;
  return out;
}

json breakdown_to_json(const FunctionalBreakdown& b) {
  return {{"bulk", number(b.bulk)},
          {"singular", number(b.singular)},
          {"boundary", number(b.boundary)},
          {"total", number(b.total)},
          {"boundary_included", b.boundary_included},
          {"recession_mode", std::string(to_string(b.recession_mode))}};
}

json lsc_to_json(const LscReport& r) {
  json traj = json::array();
  for (std::size_t i = 0; i < r.js.size(); ++i) {
    traj.push_back({{"j", r.js[i]}, {"F_uj", number(r.values[i])}, {"area_uj", number(r.areas[i])}});
  }
  return {{"trajectory", traj},
          {"liminf_estimate", number(r.liminf_estimate)},
          {"limit_value", number(r.limit_value)},
          {"tolerance", number(r.tolerance)},
          {"recession_mode", std::string(to_string(r.recession_mode))},
          {"verdict", r.pass ? "PASS" : "FAIL"}};
}

json strict_to_json(const StrictContinuityReport& r) {
  json traj = json::array();
  for (const auto& row : r.rows) {
    traj.push_back({{"delta", number(row.delta)},
                    {"area", number(row.area)},
                    {"value", number(row.value)},
                    {"area_gap", number(row.area_gap)},
                    {"value_gap", number(row.value_gap)}});
  }
  return {{"area_limit", number(r.area_limit)},
          {"value_limit", number(r.value_limit)},
          {"trajectory", traj},
          {"monotone", r.monotone},
          {"verdict", r.monotone ? "PASS" : "FAIL"}};
}

json cell_problem_to_json(const CellProblemResult& r) {
  return {{"h_at_A", number(r.h_at_A)},
          {"min_mean", number(r.min_mean)},
          {"tolerance", number(r.tolerance)},
          {"best_start", r.best_start},
          {"starts", r.starts},
          {"verdict", r.violation ? "violation" : "no_violation"}};
}

json jensen_to_json(const JensenReport& r) {
  return {{"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"gap", number(r.gap)},
          {"tolerance", number(r.tolerance)},
          {"verdict", r.holds ? "HOLDS" : "FAILS"}};
}

json inclusion_to_json(const InclusionCase& c) {
  json Q = json::array();
  for (const auto& row : c.Q) Q.push_back({number(row[0]), number(row[1])});
  return {{"tag", std::string(to_string(c.tag))},
          {"lambda1", number(c.lambda1)},
          {"lambda2", number(c.lambda2)},
          {"Q", Q},
          {"dyad", dyad_to_json(c.dyad)}};
}

json doubling_to_json(const DoublingScan& s) {
  return {{"radii", vector(s.radii)},
          {"ratios", vector(s.ratios)},
          {"sup", number(s.sup)},
          {"argmax_radius", number(s.argmax_radius)}};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

}  // namespace bdlab::io
