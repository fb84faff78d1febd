#include "bdlab/young_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "bdlab/error.hpp"

namespace bdlab {

namespace {

void check_distribution(const std::vector<WeightedMatrix>& atoms, bool unit, double tol, const std::string& where) {
  double s = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0)) throw InputError(where + ": negative weight");
    if (unit && std::abs(a.value.norm() - 1.0) > tol) throw InputError(where + ": sphere atom is not unit norm");
    s += a.weight;
  }
  if (std::abs(s - 1.0) > tol) throw InputError(where + ": weights sum to " + std::to_string(s));
}

SymMatrix mean_of(const std::vector<WeightedMatrix>& atoms, int d) {
  SymMatrix m(d);
  for (const auto& a : atoms) m += a.weight * a.value;
  return m;
}

}  // namespace

void YoungMeasure::validate(double tol) const {
  const std::size_t nc = grid.cell_count();
  if (osc.size() != nc || conc_density.size() != nc || conc_sphere.size() != nc) {
    throw InputError("Young measure arrays must have one entry per cell");
  }
  for (std::size_t c = 0; c < nc; ++c) {
    check_distribution(osc[c], false, tol, "cell " + std::to_string(c) + " oscillation");
    if (!(conc_density[c] >= 0.0) || !std::isfinite(conc_density[c])) {
      throw InputError("cell " + std::to_string(c) + ": concentration density must be finite and non-negative");
    }
    if (conc_density[c] > 0.0) check_distribution(conc_sphere[c], true, tol, "cell " + std::to_string(c) + " sphere");
  }
  for (std::size_t k = 0; k < conc_atoms.size(); ++k) {
    const auto& atom = conc_atoms[k];
    if (!(atom.mass >= 0.0)) throw InputError("concentration atom " + std::to_string(k) + ": negative mass");
    if (atom.mass > 0.0) check_distribution(atom.sphere, true, tol, "concentration atom " + std::to_string(k));
  }
}

YoungMeasure elementary_ym(const SymMeasure& mu) {
  const Grid& g = mu.grid;
  YoungMeasure nu;
  nu.grid = g;
  nu.osc.resize(g.cell_count());
  for (std::size_t c = 0; c < g.cell_count(); ++c) nu.osc[c] = {{1.0, mu.density[c]}};
  nu.conc_density.assign(g.cell_count(), 0.0);
  nu.conc_sphere.assign(g.cell_count(), {});
  for (const auto& s : mu.surface) {
    const double amp = s.amplitude.norm();
    if (amp == 0.0) continue;
    ConcentrationAtom atom;
    atom.piece = s.piece;
    atom.location = piece_centroid(s.piece);
    atom.mass = amp * piece_measure(s.piece);
    atom.sphere = {{1.0, s.amplitude / amp}};
    nu.conc_atoms.push_back(std::move(atom));
  }
  for (const auto& p : mu.points) {
    const double amp = p.value.norm();
    if (amp == 0.0) continue;
    ConcentrationAtom atom;
    atom.location = p.location;
    atom.mass = amp;
    atom.sphere = {{1.0, p.value / amp}};
    nu.conc_atoms.push_back(std::move(atom));
  }
  return nu;
}

YoungMeasure laminate_ym(const Grid& grid, const SymMatrix& A_plus, const SymMatrix& A_minus, double theta) {
  if (A_plus.dim() != grid.dim() || A_minus.dim() != grid.dim()) throw InputError("laminate matrices must match the grid");
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("laminate weight theta must lie strictly inside (0, 1)");
  const DyadTag tag = classify_dyad(A_plus - A_minus).tag;
  if (tag != DyadTag::OppositeSignDyad && tag != DyadTag::RankOneDyad) {
    throw InputError("laminate states must differ by a symmetric tensor product, got " + std::string(to_string(tag)));
  }
  YoungMeasure nu;
  nu.grid = grid;
  nu.osc.assign(grid.cell_count(), {{theta, A_plus}, {1.0 - theta, A_minus}});
  nu.conc_density.assign(grid.cell_count(), 0.0);
  nu.conc_sphere.assign(grid.cell_count(), {});
  return nu;
}

PairingReport pair_duality(const Integrand& f, const YoungMeasure& nu, RecessionMode mode, const RecessionOptions& ropts) {
  const Grid& g = nu.grid;
  if (f.dim != g.dim()) throw InputError("integrand and Young measure dimensions differ");
  PairingReport out;
  out.recession_mode = mode;
  const auto finf = [&](std::span<const double> x, const SymMatrix& S, const std::string& where) {
    try {
      return recession_value(f, x, S, mode, ropts);
    } catch (const RecessionError& e) {
      throw RecessionError(where + ": " + e.what());
    }
  };
  double bulk = 0.0, dens = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const Vec x = g.cell_center(c);
    double s = 0.0;
    for (const auto& a : nu.osc[c]) s += a.weight * f(x, a.value);
    bulk += s;
    if (nu.conc_density[c] > 0.0) {
      double t = 0.0;
      for (const auto& a : nu.conc_sphere[c]) t += a.weight * finf(x, a.value, "cell " + std::to_string(c));
      dens += nu.conc_density[c] * t;
    }
  }
  out.bulk_pairing = bulk * g.cell_volume();
  double sing = dens * g.cell_volume();
  for (std::size_t k = 0; k < nu.conc_atoms.size(); ++k) {
    const auto& atom = nu.conc_atoms[k];
    if (atom.mass == 0.0) continue;
    double t = 0.0;
    for (const auto& a : atom.sphere) t += a.weight * finf(atom.location, a.value, "concentration atom " + std::to_string(k));
    sing += atom.mass * t;
  }
  out.singular_pairing = sing;
  out.total = out.bulk_pairing + out.singular_pairing;
  return out;
}

SymMeasure barycenter(const YoungMeasure& nu) {
  const Grid& g = nu.grid;
  const int d = g.dim();
  SymMeasure mu = SymMeasure::zero(g);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    SymMatrix m = mean_of(nu.osc[c], d);
    if (nu.conc_density[c] > 0.0) m += nu.conc_density[c] * mean_of(nu.conc_sphere[c], d);
    mu.density[c] = std::move(m);
  }
  for (std::size_t k = 0; k < nu.conc_atoms.size(); ++k) {
    const auto& atom = nu.conc_atoms[k];
    const SymMatrix s = mean_of(atom.sphere, d);
    if (atom.piece) {
      mu.surface.push_back({*atom.piece, (atom.mass / piece_measure(*atom.piece)) * s, static_cast<int>(k)});
    } else {
      mu.points.push_back({atom.location, atom.mass * s});
    }
  }
  return mu;
}

JensenReport jensen_check(const YoungMeasure& nu, const Integrand& h, JensenSite site, double tol_factor,
                          const RecessionOptions& ropts) {
  if (h.x_dependent) throw InputError("jensen_check needs an x-independent integrand");
  const Grid& g = nu.grid;
  const int d = g.dim();
  if (h.dim != d) throw InputError("integrand and Young measure dimensions differ");
  const Vec x0(d, 0.0);
  const auto sharp = [&](const SymMatrix& A) { return recession_value(h, x0, A, RecessionMode::UpperSharp, ropts); };
  JensenReport out;
  if (site.kind == JensenSite::Kind::Regular) {
    if (site.index >= g.cell_count()) throw InputError("jensen_check: cell index out of range");
    const std::size_t c = site.index;
    SymMatrix bar = mean_of(nu.osc[c], d);
    double rhs = 0.0;
    for (const auto& a : nu.osc[c]) rhs += a.weight * h(x0, a.value);
    const double cd = nu.conc_density[c];
    if (cd > 0.0) {
      bar += cd * mean_of(nu.conc_sphere[c], d);
      double t = 0.0;
      for (const auto& a : nu.conc_sphere[c]) t += a.weight * sharp(a.value);
      rhs += cd * t;
    }
    out.lhs = h(x0, bar);
    out.rhs = rhs;
  } else {
    if (site.index >= nu.conc_atoms.size()) throw InputError("jensen_check: concentration atom index out of range");
    const auto& atom = nu.conc_atoms[site.index];
    out.lhs = sharp(mean_of(atom.sphere, d));
    for (const auto& a : atom.sphere) out.rhs += a.weight * sharp(a.value);
  }
  out.gap = out.rhs - out.lhs;
  out.tolerance = tol_factor * (1.0 + std::abs(out.lhs) + std::abs(out.rhs));
  out.holds = out.lhs <= out.rhs + out.tolerance;
  return out;
}

StaircaseResult staircase_average(const DisplacementField& v, const Vec& a, const Vec& b, double q1, double q2, int n,
                                  double tol) {
  const Grid& cg = v.grid();
  if (cg.dim() != 2 || a.size() != 2 || b.size() != 2) throw InputError("staircase_average is 2D only");
  if (n < 1) throw InputError("staircase_average needs n >= 1");
  if (!(a[0] > 0.0 && a[1] == 0.0 && b[0] == 0.0 && b[1] > 0.0)) {
    throw InputError("staircase_average needs a = alpha e1 and b = beta e2 with alpha, beta > 0");
  }
  const double W0 = cg.hi(0) - cg.lo(0), W1 = cg.hi(1) - cg.lo(1);
  if (std::abs(W0 * a[0] - 1.0) > 1e-9 || std::abs(W1 * b[1] - 1.0) > 1e-9) {
    throw InputError("the cell box must have side lengths 1/|a| and 1/|b|");
  }
  const int m0 = cg.nodes(0), m1 = cg.nodes(1);
  const auto vat = [&](int i, int j) { return v.at(cg.node_index(i, j)); };
  for (int j = 0; j < m1; ++j) {
    const auto r = vat(m0 - 1, j), l = vat(0, j);
    for (int c = 0; c < 2; ++c) {
      if (std::abs(r[c] - l[c] - q1 * b[c]) > tol * (1.0 + std::abs(q1 * b[c]))) {
        throw InputError("trace mismatch across the a-faces at node row " + std::to_string(j));
      }
    }
  }
  for (int i = 0; i < m0; ++i) {
    const auto t = vat(i, m1 - 1), bo = vat(i, 0);
    for (int c = 0; c < 2; ++c) {
      if (std::abs(t[c] - bo[c] - q2 * a[c]) > tol * (1.0 + std::abs(q2 * a[c]))) {
        throw InputError("trace mismatch across the b-faces at node column " + std::to_string(i));
      }
    }
  }

  const int N0 = n * (m0 - 1) + 1, N1 = n * (m1 - 1) + 1;
  const Grid grid(cg.lo(), cg.hi(), {N0, N1});
  // Value of tile (k, l) at its local node (i, j).
  const auto tile_value = [&](int k, int l, int i, int j, int c) {
    return (vat(i, j)[c] + q1 * k * b[c] + q2 * l * a[c]) / n;
  };
  std::vector<double> vals(2 * grid.node_count());
  for (int J = 0; J < N1; ++J) {
    const int l = std::min(J / (m1 - 1), n - 1), j = J - l * (m1 - 1);
    for (int I = 0; I < N0; ++I) {
      const int k = std::min(I / (m0 - 1), n - 1), i = I - k * (m0 - 1);
      const std::size_t node = grid.node_index(I, J);
      for (int c = 0; c < 2; ++c) vals[2 * node + c] = tile_value(k, l, i, j, c);
    }
  }
  std::vector<JumpInterface> jumps;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (const auto& jump : v.jumps()) {
        std::vector<Vec> verts;
        for (const auto& p : jump.vertices) {
          verts.push_back({cg.lo(0) + (k * W0 + p[0] - cg.lo(0)) / n, cg.lo(1) + (l * W1 + p[1] - cg.lo(1)) / n});
        }
        jumps.push_back(JumpInterface::polyline(std::move(verts), {jump.jump[0] / n, jump.jump[1] / n}));
      }

  StaircaseResult out;
  out.u = DisplacementField(grid, std::move(vals), std::move(jumps));
  out.affine = {{q1 * b[0] * a[0] + q2 * a[0] * b[0], q1 * b[0] * a[1] + q2 * a[0] * b[1]},
                {q1 * b[1] * a[0] + q2 * a[1] * b[0], q1 * b[1] * a[1] + q2 * a[1] * b[1]}};
  out.target = (q1 + q2) * sym_dyad(a, b);

  // Mismatch between neighbouring tiles at shared nodes, plus any surface
  // atom lying on a gluing line.
  const double h0 = grid.spacing(0), h1 = grid.spacing(1);
  const Vec e1{1.0, 0.0}, e2{0.0, 1.0};
  double glue = 0.0;
  for (int k = 1; k < n; ++k) {
    for (int J = 0; J < N1; ++J) {
      const int l = std::min(J / (m1 - 1), n - 1), j = J - l * (m1 - 1);
      const Vec jump{tile_value(k, l, 0, j, 0) - tile_value(k - 1, l, m0 - 1, j, 0),
                     tile_value(k, l, 0, j, 1) - tile_value(k - 1, l, m0 - 1, j, 1)};
      glue += sym_dyad(jump, e1).norm() * h1 * ((J == 0 || J == N1 - 1) ? 0.5 : 1.0);
    }
  }
  for (int l = 1; l < n; ++l) {
    for (int I = 0; I < N0; ++I) {
      const int k = std::min(I / (m0 - 1), n - 1), i = I - k * (m0 - 1);
      const Vec jump{tile_value(k, l, i, 0, 0) - tile_value(k, l - 1, i, m1 - 1, 0),
                     tile_value(k, l, i, 0, 1) - tile_value(k, l - 1, i, m1 - 1, 1)};
      glue += sym_dyad(jump, e2).norm() * h0 * ((I == 0 || I == N0 - 1) ? 0.5 : 1.0);
    }
  }
  const SymMeasure mu = assemble_symmetrized_measure(out.u);
  const double eps = 1e-9 * grid.min_spacing();
  const auto on_gluing_line = [&](const SurfacePiece& p) {
    for (int axis = 0; axis < 2; ++axis) {
      const double W = axis == 0 ? W0 : W1;
      for (int k = 1; k < n; ++k) {
        const double line = cg.lo(axis) + k * W / n;
        bool all = true;
        for (const auto& vtx : p.vertices) all = all && std::abs(vtx[axis] - line) <= eps;
        if (all) return true;
      }
    }
    return false;
  };
  for (const auto& s : mu.surface) {
    if (on_gluing_line(s.piece)) glue += s.amplitude.norm() * piece_measure(s.piece);
  }
  out.gluing_mass = glue;

  // L1 distance to T x + c with c the mean residual.
  std::vector<double> weight(grid.node_count());
  std::vector<Vec> res(grid.node_count(), Vec(2));
  Vec mean(2, 0.0);
  double wsum = 0.0;
  for (int J = 0; J < N1; ++J)
    for (int I = 0; I < N0; ++I) {
      const std::size_t node = grid.node_index(I, J);
      const double w = h0 * h1 * ((I == 0 || I == N0 - 1) ? 0.5 : 1.0) * ((J == 0 || J == N1 - 1) ? 0.5 : 1.0);
      const Vec x = grid.node_position(node);
      for (int c = 0; c < 2; ++c) {
        res[node][c] = out.u.at(node)[c] - (out.affine[c][0] * x[0] + out.affine[c][1] * x[1]);
        mean[c] += w * res[node][c];
      }
      weight[node] = w;
      wsum += w;
    }
  for (auto& m : mean) m /= wsum;
  double dist = 0.0;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    dist += weight[node] * std::hypot(res[node][0] - mean[0], res[node][1] - mean[1]);
  }
  out.dist_to_affine = dist;
  return out;
}

namespace {

struct Histogram {
  std::map<std::vector<long>, std::pair<SymMatrix, double>> bins;  // sum of weighted samples, total weight

  void add(const std::vector<long>& key, const SymMatrix& value, double w) {
    auto it = bins.find(key);
    if (it == bins.end()) {
      bins.emplace(key, std::make_pair(w * value, w));
    } else {
      it->second.first += w * value;
      it->second.second += w;
    }
  }
};

std::vector<long> bin_key(const SymMatrix& m, const Vec& lo, double width, int bins) {
  const auto p = m.packed();
  std::vector<long> key(p.size(), 0);
  if (width <= 0.0) return key;
  for (std::size_t i = 0; i < p.size(); ++i) {
    key[i] = std::clamp(static_cast<long>(std::floor((p[i] - lo[i]) / width)), 0L, static_cast<long>(bins - 1));
  }
  return key;
}

}  // namespace

YoungMeasure empirical_ym(const std::vector<DisplacementField>& seq, const EmpiricalOptions& opts) {
  if (seq.empty()) throw InputError("empirical_ym needs at least one field");
  if (opts.window < 1 || opts.bins < 1 || !(opts.cutoff_factor > 0)) throw InputError("invalid empirical_ym options");
  const Grid& g = seq.front().grid();
  const int d = g.dim();
  for (const auto& u : seq) {
    if (!(u.grid() == g)) throw InputError("empirical_ym fields must share a grid");
  }
  std::vector<int> wcount(d);
  std::size_t nwin = 1;
  for (int k = 0; k < d; ++k) {
    if (g.cells(k) % opts.window != 0) throw InputError("window size must divide the cell count on every axis");
    wcount[k] = g.cells(k) / opts.window;
    nwin *= static_cast<std::size_t>(wcount[k]);
  }
  const std::size_t nc = g.cell_count();
  std::vector<std::size_t> window_of(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto idx = g.cell_multi_index(c);
    std::size_t w = 0, stride = 1;
    for (int k = 0; k < d; ++k) {
      w += static_cast<std::size_t>(idx[k] / opts.window) * stride;
      stride *= static_cast<std::size_t>(wcount[k]);
    }
    window_of[c] = w;
  }

  std::vector<std::vector<SymMatrix>> strains;
  std::vector<double> norms;
  for (const auto& u : seq) {
    strains.push_back(sym_gradient(u).sym);
    for (const auto& m : strains.back()) norms.push_back(m.norm());
  }
  std::nth_element(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(norms.size() / 2), norms.end());
  const double cutoff = opts.cutoff_factor * norms[norms.size() / 2];

  const std::size_t ps = strains.front().front().packed_size();
  Vec lo(ps, std::numeric_limits<double>::infinity()), hi(ps, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (const auto& s : strains)
    for (const auto& m : s) {
      const bool conc = m.norm() > cutoff;
      for (std::size_t i = 0; i < ps; ++i) {
        const double v = conc ? 0.0 : m.packed()[i];
        lo[i] = std::min(lo[i], v);
        hi[i] = std::max(hi[i], v);
      }
      any = true;
    }
  double width = 0.0;
  if (any)
    for (std::size_t i = 0; i < ps; ++i) width = std::max(width, (hi[i] - lo[i]) / opts.bins);
  const Vec sphere_lo(ps, -1.0);
  const double sphere_width = 2.0 / opts.bins;

  std::vector<Histogram> osc(nwin), sphere(nwin);
  std::vector<double> conc_mass(nwin, 0.0);
  const double nseq = static_cast<double>(seq.size());
  const double vol = g.cell_volume();
  for (const auto& s : strains) {
    for (std::size_t c = 0; c < nc; ++c) {
      const SymMatrix& m = s[c];
      const double norm = m.norm();
      const std::size_t w = window_of[c];
      if (norm > cutoff) {
        const SymMatrix zero(d);
        osc[w].add(bin_key(zero, lo, width, opts.bins), zero, 1.0);
        const SymMatrix dir = m / norm;
        sphere[w].add(bin_key(dir, sphere_lo, sphere_width, opts.bins), dir, norm);
        conc_mass[w] += norm * vol / nseq;
      } else {
        osc[w].add(bin_key(m, lo, width, opts.bins), m, 1.0);
      }
    }
  }

  YoungMeasure nu;
  nu.grid = g;
  nu.osc.resize(nc);
  nu.conc_density.assign(nc, 0.0);
  nu.conc_sphere.assign(nc, {});
  const double window_volume = vol * std::pow(static_cast<double>(opts.window), d);
  std::vector<std::vector<WeightedMatrix>> osc_atoms(nwin), sphere_atoms(nwin);
  for (std::size_t w = 0; w < nwin; ++w) {
    double total = 0.0;
    for (const auto& [key, acc] : osc[w].bins) total += acc.second;
    for (const auto& [key, acc] : osc[w].bins) osc_atoms[w].push_back({acc.second / total, acc.first / acc.second});
    double stotal = 0.0;
    for (const auto& [key, acc] : sphere[w].bins) stotal += acc.second;
    for (const auto& [key, acc] : sphere[w].bins) {
      SymMatrix dir = acc.first / acc.second;
      const double n = dir.norm();
      if (n > 0.0) dir /= n;
      sphere_atoms[w].push_back({acc.second / stotal, dir});
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t w = window_of[c];
    nu.osc[c] = osc_atoms[w];
    if (conc_mass[w] > 0.0) {
      nu.conc_density[c] = conc_mass[w] / window_volume;
      nu.conc_sphere[c] = sphere_atoms[w];
    }
  }
  for (const auto& u : seq) {
    const SymMeasure mu = assemble_symmetrized_measure(u);
    for (const auto& s : mu.surface) {
      const double amp = s.amplitude.norm();
      if (amp == 0.0) continue;
      ConcentrationAtom atom;
      atom.piece = s.piece;
      atom.location = piece_centroid(s.piece);
      atom.mass = amp * piece_measure(s.piece) / nseq;
      atom.sphere = {{1.0, s.amplitude / amp}};
      nu.conc_atoms.push_back(std::move(atom));
    }
  }
  return nu;
}

}  // namespace bdlab
