#include "bdlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "bdlab/error.hpp"
#include "bdlab/quasiconvexity.hpp"

namespace bdlab {

namespace {

double recession_at(const Integrand& f, std::span<const double> x, const SymMatrix& M, const FunctionalOptions& opts) {
  if (M.norm() == 0.0) return 0.0;
  return recession_value(f, x, M, opts.recession_mode, opts.recession);
}

// Trapezoid weights of every (boundary node, face) pair.
struct BoundaryPoint {
  std::size_t node;
  double weight;
  Vec normal;  // inner
};

std::vector<BoundaryPoint> boundary_points(const Grid& g) {
  const int d = g.dim();
  if (d < 2) throw InputError("boundary terms need d >= 2");
  std::vector<BoundaryPoint> out;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const auto idx = g.node_multi_index(n);
    for (int k = 0; k < d; ++k) {
      const bool lo = idx[k] == 0, hi = idx[k] == g.nodes(k) - 1;
      if (!lo && !hi) continue;
      double w = 1.0;
      for (int m = 0; m < d; ++m) {
        if (m == k) continue;
        const bool end = idx[m] == 0 || idx[m] == g.nodes(m) - 1;
        w *= g.spacing(m) * (end ? 0.5 : 1.0);
      }
      Vec normal(d, 0.0);
      normal[k] = lo ? 1.0 : -1.0;
      out.push_back({n, w, std::move(normal)});
    }
  }
  return out;
}

Vec boundary_trace(const DisplacementField& u, std::size_t node, const FunctionalOptions& opts) {
  const auto v = u.at(node);
  Vec t(v.begin(), v.end());
  if (opts.dirichlet) {
    const Vec x = u.grid().node_position(node);
    const Vec g = (*opts.dirichlet)(x);
    if (g.size() != t.size()) throw InputError("dirichlet data has wrong dimension");
    for (std::size_t i = 0; i < t.size(); ++i) t[i] -= g[i];
  }
  return t;
}

double boundary_term(const Integrand& f, const DisplacementField& u, const FunctionalOptions& opts) {
  double s = 0.0;
  for (const auto& bp : boundary_points(u.grid())) {
    const Vec t = boundary_trace(u, bp.node, opts);
    const Vec x = u.grid().node_position(bp.node);
    s += bp.weight * recession_at(f, x, sym_dyad(t, bp.normal), opts);
  }
  return s;
}

}  // namespace

FunctionalBreakdown evaluate_on_measure(const Integrand& f, const SymMeasure& mu, const FunctionalOptions& opts) {
  FunctionalBreakdown out;
  out.recession_mode = opts.recession_mode;
  const Grid& g = mu.grid;
  double bulk = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) bulk += f(g.cell_center(c), mu.density[c]);
  out.bulk = bulk * g.cell_volume();
  // x-independent integrands reuse f^inf per distinct amplitude.
  std::map<std::vector<double>, double> cache;
  for (const auto& atom : mu.surface) {
    const double amp = atom.amplitude.norm();
    if (amp == 0.0) continue;
    const SymMatrix dir = atom.amplitude / amp;
    double finf;
    const std::vector<double> key(dir.packed().begin(), dir.packed().end());
    if (!f.x_dependent && cache.count(key)) {
      finf = cache[key];
    } else {
      finf = recession_at(f, piece_centroid(atom.piece), dir, opts);
      if (!f.x_dependent) cache[key] = finf;
    }
    out.singular += finf * amp * piece_measure(atom.piece);
  }
  for (const auto& p : mu.points) out.singular += recession_at(f, p.location, p.value, opts);
  out.total = out.bulk + out.singular;
  return out;
}

FunctionalBreakdown evaluate_functional(const Integrand& f, const DisplacementField& u, const FunctionalOptions& opts) {
  if (f.dim != u.dim()) throw InputError("integrand and field dimensions differ");
  FunctionalBreakdown out = evaluate_on_measure(f, assemble_symmetrized_measure(u), opts);
  out.boundary_included = opts.include_boundary;
  if (opts.include_boundary) {
    out.boundary = boundary_term(f, u, opts);
    out.total = out.bulk + out.singular + out.boundary;
  }
  return out;
}

double area_functional(const SymMeasure& mu) {
  double s = 0.0;
  for (const auto& m : mu.density) s += std::sqrt(1.0 + m.norm_squared());
  return s * mu.grid.cell_volume() + singular_mass(mu);
}

double bspline_kernel(double t, double delta) {
  const double s = std::abs(2.0 * t / delta);
  double b = 0.0;
  if (s < 1.0) b = 2.0 / 3.0 - s * s + 0.5 * s * s * s;
  else if (s < 2.0) b = (2.0 - s) * (2.0 - s) * (2.0 - s) / 6.0;
  return 2.0 / delta * b;
}

DisplacementField mollify(const DisplacementField& u, double delta) {
  if (!(delta > 0)) throw InputError("mollification radius must be positive");
  const Grid& g = u.grid();
  const int d = g.dim();
  std::vector<double> vals = u.values();
  const double eps = 1e-9 * g.min_spacing();
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    for (const auto& jump : u.jumps()) {
      if (std::abs(jump.signed_distance(x)) <= eps) {
        for (int i = 0; i < d; ++i) vals[n * d + i] += 0.5 * jump.jump[i];
      }
    }
  }
  std::vector<double> next(vals.size());
  for (int axis = 0; axis < d; ++axis) {
    const double h = g.spacing(axis);
    const int reach = static_cast<int>(std::floor(delta / h));
    std::vector<double> w(2 * reach + 1);
    double total = 0.0;
    for (int j = -reach; j <= reach; ++j) total += w[j + reach] = bspline_kernel(j * h, delta);
    for (auto& v : w) v /= total;
    const int nk = g.nodes(axis);
    std::size_t stride = 1;
    for (int m = 0; m < axis; ++m) stride *= static_cast<std::size_t>(g.nodes(m));
    const std::size_t lines = g.node_count() / static_cast<std::size_t>(nk);
    std::vector<double> pad(static_cast<std::size_t>(nk + 2 * reach));
    for (std::size_t line = 0; line < lines; ++line) {
      const std::size_t base = (line / stride) * stride * static_cast<std::size_t>(nk) + line % stride;
      for (int c = 0; c < d; ++c) {
        for (int i = -reach; i < nk + reach; ++i) {
          const auto src = static_cast<std::size_t>(std::clamp(i, 0, nk - 1));
          pad[static_cast<std::size_t>(i + reach)] = vals[(base + src * stride) * d + c];
        }
        for (int i = 0; i < nk; ++i) {
          // w is symmetric, so correlation equals convolution.
          const double* p = pad.data() + i;
          double s = 0.0;
          for (int j = 0; j <= 2 * reach; ++j) s += w[j] * p[j];
          next[(base + static_cast<std::size_t>(i) * stride) * d + c] = s;
        }
      }
    }
    vals.swap(next);
  }
  return DisplacementField(g, std::move(vals));
}

StrictContinuityReport strict_continuity_experiment(const Integrand& f, const DisplacementField& u,
                                                    const std::vector<double>& deltas, const FunctionalOptions& opts) {
  if (deltas.empty()) throw InputError("strict_continuity_experiment needs at least one radius");
  const double h = u.grid().max_spacing();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InputError("mollification radii must decrease");
    if (deltas[i] < 2.0 * h) {
      throw ResolutionError("mollification radius " + std::to_string(deltas[i]) + " is below 2h = " +
                            std::to_string(2.0 * h));
    }
  }
  StrictContinuityReport rep;
  const auto area_and_value = [&](const DisplacementField& v) {
    const SymMeasure mu = assemble_symmetrized_measure(v);
    double value = evaluate_on_measure(f, mu, opts).total;
    if (opts.include_boundary) value += boundary_term(f, v, opts);
    return std::pair{area_functional(mu), value};
  };
  std::tie(rep.area_limit, rep.value_limit) = area_and_value(u);
  for (double delta : deltas) {
    StrictContinuityRow row;
    row.delta = delta;
    std::tie(row.area, row.value) = area_and_value(mollify(u, delta));
    row.area_gap = std::abs(row.area - rep.area_limit);
    row.value_gap = std::abs(row.value - rep.value_limit);
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.monotone = rep.monotone && rep.rows[i].value_gap < rep.rows[i - 1].value_gap;
  }
  return rep;
}

std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Laminate: return "laminate";
    case SequenceKind::Concentration: return "concentration";
    case SequenceKind::Mollification: return "mollification";
  }
  return "?";
}

namespace {

double smooth_step(double s) {
  const double p = std::clamp(s + 0.5, 0.0, 1.0);
  return p * p * (3.0 - 2.0 * p);
}

void check_direction(const SequenceSpec& seq, int d) {
  if (static_cast<int>(seq.a.size()) != d || static_cast<int>(seq.b.size()) != d) {
    throw InputError("sequence directions must match the field dimension");
  }
  if (!(euclidean_norm(seq.a) > 0)) throw InputError("sequence direction a must be non-zero");
}

}  // namespace

DisplacementField realize(const SequenceSpec& seq, int j) {
  if (j < 1) throw InputError("sequence indices must be positive");
  const DisplacementField& base = seq.base;
  const Grid& g = base.grid();
  const int d = g.dim();
  const double h = g.max_spacing();
  if (seq.kind == SequenceKind::Mollification) {
    const double delta = seq.amplitude / j;
    if (delta < 2.0 * h) throw ResolutionError("mollification radius below 2h at j = " + std::to_string(j));
    return mollify(base, delta);
  }
  check_direction(seq, d);
  const double length = 1.0 / (j * euclidean_norm(seq.a));
  if (length < 4.0 * h) {
    throw ResolutionError(std::string(to_string(seq.kind)) + " length scale " + std::to_string(length) +
                          " is below 4h at j = " + std::to_string(j));
  }
  DisplacementField out = base;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    const double t = dot(x, seq.a);
    double s;
    if (seq.kind == SequenceKind::Laminate) {
      const double phase = j * t;
      s = seq.profile == Profile::Sawtooth ? sawtooth(phase) : std::sin(2.0 * std::numbers::pi * phase) / (2.0 * std::numbers::pi);
      s *= seq.amplitude / j;
    } else {
      s = seq.amplitude * smooth_step(j * (t - seq.offset));
    }
    auto v = out.at(n);
    for (int i = 0; i < d; ++i) v[i] += s * seq.b[i];
  }
  return out;
}

DisplacementField sequence_limit(const SequenceSpec& seq) {
  if (seq.kind != SequenceKind::Concentration) return seq.base;
  const Grid& g = seq.base.grid();
  if (g.dim() != 2) throw InputError("concentration limits are built in 2D only");
  check_direction(seq, 2);
  const double an = euclidean_norm(seq.a);
  const Vec t{-seq.a[1] / an, seq.a[0] / an};
  const Vec p0{seq.offset * seq.a[0] / (an * an), seq.offset * seq.a[1] / (an * an)};
  // Clip the line p0 + s t to the box.
  double s0 = -std::numeric_limits<double>::infinity(), s1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (t[k] == 0.0) {
      if (p0[k] < g.lo(k) || p0[k] > g.hi(k)) return seq.base;
      continue;
    }
    double a = (g.lo(k) - p0[k]) / t[k], b = (g.hi(k) - p0[k]) / t[k];
    if (a > b) std::swap(a, b);
    s0 = std::max(s0, a);
    s1 = std::min(s1, b);
  }
  const Vec jump{seq.amplitude * seq.b[0], seq.amplitude * seq.b[1]};
  std::vector<JumpInterface> jumps = seq.base.jumps();
  if (s1 - s0 > 1e-12) {
    jumps.push_back(JumpInterface::polyline({{p0[0] + s0 * t[0], p0[1] + s0 * t[1]}, {p0[0] + s1 * t[0], p0[1] + s1 * t[1]}},
                                            jump));
  }
  std::vector<double> vals = seq.base.values();
  const double eps = 1e-9 * g.min_spacing();
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    if (dot(x, seq.a) - seq.offset > eps * an) {
      vals[2 * n] += jump[0];
      vals[2 * n + 1] += jump[1];
    }
  }
  return DisplacementField(g, std::move(vals), std::move(jumps));
}

LscReport lsc_experiment(const Integrand& f, const SequenceSpec& seq, const FunctionalOptions& opts) {
  if (seq.js.empty()) throw InputError("lsc_experiment needs a non-empty j list");
  LscReport rep;
  rep.recession_mode = opts.recession_mode;
  rep.js = seq.js;
  for (int j : seq.js) {
    const DisplacementField uj = realize(seq, j);
    rep.values.push_back(evaluate_functional(f, uj, opts).total);
    rep.areas.push_back(area_functional(assemble_symmetrized_measure(uj)));
  }
  rep.limit_value = evaluate_functional(f, sequence_limit(seq), opts).total;
  const std::size_t tail = rep.values.size() / 2;
  rep.liminf_estimate = *std::min_element(rep.values.begin() + static_cast<std::ptrdiff_t>(tail), rep.values.end());
  rep.tolerance = 1e-6 * (1.0 + std::abs(rep.limit_value));
  rep.pass = rep.liminf_estimate >= rep.limit_value - rep.tolerance;
  return rep;
}

namespace {

struct MinProblem {
  const Integrand& f;
  const Grid& g;
  const MinimizeOptions& opts;
  std::vector<BoundaryPoint> bpoints;
  std::vector<Vec> centers;

  MinProblem(const Integrand& fi, const Grid& gi, const MinimizeOptions& o) : f(fi), g(gi), opts(o) {
    if (opts.functional.include_boundary) bpoints = boundary_points(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) centers.push_back(g.cell_center(c));
  }

  double boundary_value(const std::vector<double>& vals, const BoundaryPoint& bp, std::span<const double> shift) const {
    const int d = g.dim();
    const Vec x = g.node_position(bp.node);
    Vec t(d);
    for (int i = 0; i < d; ++i) t[i] = vals[bp.node * d + i] + shift[i];
    if (opts.functional.dirichlet) {
      const Vec gx = (*opts.functional.dirichlet)(x);
      for (int i = 0; i < d; ++i) t[i] -= gx[i];
    }
    return bp.weight * recession_at(f, x, sym_dyad(t, bp.normal), opts.functional);
  }

  double objective(const std::vector<double>& vals, std::vector<double>* grad) const {
    const int d = g.dim();
    const double vol = g.cell_volume();
    const double w = 1.0 / static_cast<double>(std::size_t{1} << (d - 1));
    if (grad) grad->assign(vals.size(), 0.0);
    double total = 0.0;
    std::vector<Vec> du(d, Vec(d));
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const auto corners = g.cell_corners(c);
      for (auto& r : du) std::fill(r.begin(), r.end(), 0.0);
      for (std::size_t q = 0; q < corners.size(); ++q) {
        for (int k = 0; k < d; ++k) {
          if (!((q >> k) & 1U)) continue;
          const std::size_t lower = corners[q ^ (std::size_t{1} << k)];
          for (int i = 0; i < d; ++i) du[i][k] += (vals[corners[q] * d + i] - vals[lower * d + i]) * w / g.spacing(k);
        }
      }
      SymMatrix E(d);
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) E(i, j) = 0.5 * (du[i][j] + du[j][i]);
      const double v = f(centers[c], E);
      if (!std::isfinite(v)) throw SearchAbort("integrand is not finite during minimization");
      total += v * vol;
      if (!grad) continue;
      const SymMatrix G = f.gradient(centers[c], E);
      for (std::size_t q = 0; q < corners.size(); ++q) {
        for (int i = 0; i < d; ++i) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) s += G(i, k) * (((q >> k) & 1U) ? 1.0 : -1.0) * w / g.spacing(k);
          (*grad)[corners[q] * d + i] += s * vol;
        }
      }
    }
    const Vec zero(d, 0.0);
    for (const auto& bp : bpoints) {
      total += boundary_value(vals, bp, zero);
      if (!grad) continue;
      for (int i = 0; i < d; ++i) {
        Vec shift(d, 0.0);
        const double eps = 1e-7 * (1.0 + std::abs(vals[bp.node * d + i]));
        shift[i] = eps;
        const double up = boundary_value(vals, bp, shift);
        shift[i] = -eps;
        const double down = boundary_value(vals, bp, shift);
        (*grad)[bp.node * d + i] += (up - down) / (2.0 * eps);
      }
    }
    return total;
  }

  std::vector<double> affine_values(std::span<const double> p) const {
    const int d = g.dim();
    std::vector<double> vals(g.node_count() * d);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      const Vec x = g.node_position(n);
      for (int i = 0; i < d; ++i) {
        double s = p[i];
        for (int j = 0; j < d; ++j) {
          const int a = std::min(i, j), b = std::max(i, j);
          const int slot = a * d - a * (a - 1) / 2 + (b - a);
          s += p[d + slot] * x[j];
        }
        vals[n * d + i] = s;
      }
    }
    return vals;
  }

  // Compass search over u = c + B x.
  std::vector<double> best_affine() const {
    const int d = g.dim();
    const int np = d + d * (d + 1) / 2;
    std::vector<double> p(np, 0.0);
    double best = objective(affine_values(p), nullptr);
    double step = 1.0;
    while (step > 1e-10) {
      bool improved = false;
      for (int k = 0; k < np; ++k) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> q = p;
          q[k] += sgn * step;
          const double v = objective(affine_values(q), nullptr);
          if (v < best - 1e-15 * (1.0 + std::abs(best))) {
            best = v;
            p = std::move(q);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return affine_values(p);
  }

  std::pair<double, bool> descend(std::vector<double>& vals) const {
    std::vector<double> grad, grad_new, trial(vals.size());
    double J = objective(vals, &grad);
    double gmax = 0.0;
    for (double v : grad) gmax = std::max(gmax, std::abs(v));
    const double step0 = gmax > 0 ? 0.1 * g.min_spacing() / gmax : 1.0;
    double step = step0;
    int failures = 0;
    for (int it = 0; it < opts.iters && gmax > 0; ++it) {
      bool accepted = false;
      double J_new = J;
      for (int bt = 0; bt < 30; ++bt) {
        double decrease = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
          trial[k] = vals[k] - step * grad[k];
          decrease += step * grad[k] * grad[k];
        }
        J_new = objective(trial, nullptr);
        if (decrease > 0 && J_new <= J - 1e-4 * decrease) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (++failures >= 50) return {J, true};
        step = step0;
        continue;
      }
      failures = 0;
      objective(trial, &grad_new);
      double ss = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < vals.size(); ++k) {
        const double s = trial[k] - vals[k], y = grad_new[k] - grad[k];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0 ? ss / sy : 2.0 * step;
      vals.swap(trial);
      grad.swap(grad_new);
      J = J_new;
    }
    return {J, false};
  }
};

void check_coercivity(const Integrand& f, const Grid& g, double m, double c) {
  if (!(m > 0)) throw InputError("coercivity constant m must be positive");
  std::mt19937_64 rng(0xc0e1ULL);
  std::uniform_real_distribution<double> expo(-2.0, 4.0), unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = g.dim();
  for (int s = 0; s < 2000; ++s) {
    SymMatrix A(d);
    for (auto& v : A.packed()) v = normal(rng);
    A *= std::pow(10.0, expo(rng)) / std::max(A.norm(), 1e-300);
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = g.lo(k) + unit(rng) * (g.hi(k) - g.lo(k));
    const double v = f(x, A);
    if (!(m * (A.norm() - c) <= v + 1e-9 * (1.0 + A.norm()))) {
      throw InputError("coercivity m (|A| - c) <= f(x, A) fails at |A| = " + std::to_string(A.norm()));
    }
  }
}

}  // namespace

MinimizeResult minimize_functional(const Integrand& f, const Grid& grid, const MinimizeOptions& opts) {
  if (f.dim != grid.dim()) throw InputError("integrand and grid dimensions differ");
  check_coercivity(f, grid, opts.coercivity_m, opts.coercivity_c);
  const MinProblem prob(f, grid, opts);
  const int d = grid.dim();

  std::vector<std::vector<double>> starts;
  starts.emplace_back(grid.node_count() * d, 0.0);
  starts.push_back(prob.best_affine());
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int r = 0; r < opts.random_starts; ++r) {
    std::vector<double> v = starts[1];
    for (auto& x : v) x += noise(rng);
    starts.push_back(std::move(v));
  }
  for (const auto& comp : opts.competitors) {
    if (!(comp.grid() == grid)) throw InputError("competitor lives on a different grid");
    if (!comp.jumps().empty()) throw InputError("competitors must be jump-free");
    starts.push_back(comp.values());
  }

  MinimizeResult out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::vector<double> vals = starts[s];
    const auto [J, stagnated] = prob.descend(vals);
    if (J < best) {
      best = J;
      out.best_start = static_cast<int>(s);
      out.stagnated = stagnated;
      out.u = DisplacementField(grid, std::move(vals));
    }
  }
  out.breakdown = evaluate_functional(f, out.u, opts.functional);
  return out;
}

}  // namespace bdlab
