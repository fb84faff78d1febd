#include "bdlab/rigidity2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdlab/error.hpp"

namespace bdlab {

std::string_view to_string(InclusionTag tag) {
  switch (tag) {
    case InclusionTag::Trivial: return "trivial";
    case InclusionTag::OppositeSign: return "opposite_sign";
    case InclusionTag::Degenerate: return "degenerate";
    case InclusionTag::Elliptic: return "elliptic";
  }
  return "?";
}

InclusionCase classify_inclusion(const SymMatrix& P, double tol) {
  if (P.dim() != 2) throw InputError("classify_inclusion needs a 2x2 matrix");
  InclusionCase out;
  out.dyad = classify_dyad(P, tol);
  const SymEigen eig = eigen_decompose(P);
  out.lambda1 = eig.values[0];
  out.lambda2 = eig.values[1];
  out.Q = {{{eig.vectors[0][0], eig.vectors[0][1]}, {eig.vectors[1][0], eig.vectors[1][1]}}};
  switch (out.dyad.tag) {
    case DyadTag::Zero: out.tag = InclusionTag::Trivial; break;
    case DyadTag::OppositeSignDyad: out.tag = InclusionTag::OppositeSign; break;
    case DyadTag::NotDyad: out.tag = InclusionTag::Elliptic; break;
    case DyadTag::RankOneDyad:
      out.tag = InclusionTag::Degenerate;
      if (std::abs(out.lambda1) < std::abs(out.lambda2)) {
        std::swap(out.lambda1, out.lambda2);
        std::swap(out.Q[0], out.Q[1]);
      }
      break;
  }
  return out;
}

namespace {

std::vector<double> fd_slopes(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::vector<double> s(n);
  s[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  s[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  return s;
}

}  // namespace

Profile1D::Profile1D(double lo, double hi, std::vector<double> values)
    : Profile1D(lo, hi, values, values.size() >= 3 && hi > lo
                                    ? fd_slopes(values, (hi - lo) / static_cast<double>(values.size() - 1))
                                    : std::vector<double>(values.size())) {}

Profile1D::Profile1D(double lo, double hi, std::vector<double> values, std::vector<double> slopes)
    : lo_(lo), hi_(hi), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (!(hi_ > lo_)) throw InputError("profile interval must have lo < hi");
  if (values_.size() < 3) throw InputError("profiles need at least three samples");
  if (slopes_.size() != values_.size()) throw InputError("profile slopes and values differ in length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(slopes_[i])) throw InputError("profile samples must be finite");
  }
}

Profile1D Profile1D::sample(const std::function<double(double)>& fn, double lo, double hi, int n) {
  if (n < 3) throw InputError("profiles need at least three samples");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = fn(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
  return Profile1D(lo, hi, std::move(v));
}

Profile1D Profile1D::over_projection(const std::function<double(double)>& fn, const Grid& grid,
                                     std::array<double, 2> dir, int refine) {
  if (grid.dim() != 2) throw InputError("profiles project 2D grids only");
  if (refine < 1) throw InputError("profile refinement must be at least 1");
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int c = 0; c < 4; ++c) {
    const double x = (c & 1) ? grid.hi(0) : grid.lo(0), y = (c & 2) ? grid.hi(1) : grid.lo(1);
    const double t = x * dir[0] + y * dir[1];
    lo = first ? t : std::min(lo, t);
    hi = first ? t : std::max(hi, t);
    first = false;
  }
  const double norm = std::hypot(dir[0], dir[1]);
  if (!(hi > lo) || !(norm > 0)) throw InputError("profile direction must be non-zero");
  const double h = grid.min_spacing() * norm / refine;
  const int n = std::max(3, static_cast<int>(std::ceil((hi - lo) / h)) + 1);
  return sample(fn, lo, hi, n);
}

namespace {

struct Locate {
  std::size_t i;
  double s;
};

Locate locate(double t, double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  const double slack = 1e-9 * (hi - lo);
  if (!(t >= lo - slack && t <= hi + slack)) {
    throw InputError("profile evaluated at " + std::to_string(t) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
  const double r = std::clamp((t - lo) / h, 0.0, static_cast<double>(n - 1));
  const std::size_t i = std::min(static_cast<std::size_t>(r), n - 2);
  return {i, r - static_cast<double>(i)};
}

}  // namespace

double Profile1D::operator()(double t) const {
  const auto [i, s] = locate(t, lo_, hi_, values_.size());
  const double h = spacing();
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * values_[i] + (s3 - 2 * s2 + s) * h * slopes_[i] + (-2 * s3 + 3 * s2) * values_[i + 1] +
         (s3 - s2) * h * slopes_[i + 1];
}

double Profile1D::derivative(double t) const {
  const auto [i, s] = locate(t, lo_, hi_, values_.size());
  const double h = spacing();
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * values_[i] + (-6 * s2 + 6 * s) * values_[i + 1]) / h + (3 * s2 - 4 * s + 1) * slopes_[i] +
         (3 * s2 - 2 * s) * slopes_[i + 1];
}

Profile1D Profile1D::antiderivative() const {
  std::vector<double> H(values_.size(), 0.0);
  const double h = spacing();
  for (std::size_t i = 1; i < H.size(); ++i) H[i] = H[i - 1] + 0.5 * h * (values_[i - 1] + values_[i]);
  return Profile1D(lo_, hi_, std::move(H), values_);
}

namespace {

void require_2d(const Grid& grid) {
  if (grid.dim() != 2) throw InputError("rigidity solvers need a 2D grid");
}

double residual_against(const DisplacementField& u, const SymMatrix& P, const std::vector<double>& g_cell) {
  const CellGradient grad = sym_gradient(u);
  double worst = 0.0;
  for (std::size_t c = 0; c < grad.sym.size(); ++c) worst = std::max(worst, (grad.sym[c] - g_cell[c] * P).norm());
  return worst;
}

}  // namespace

double inclusion_residual(const DisplacementField& u, const SymMatrix& P,
                          const std::function<double(std::span<const double>)>& g) {
  if (P.dim() != u.dim()) throw InputError("inclusion matrix and field dimensions differ");
  const Grid& grid = u.grid();
  std::vector<double> g_cell(grid.cell_count());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) g_cell[c] = g(grid.cell_center(c));
  return residual_against(u, P, g_cell);
}

RigiditySolution solve_opposite_sign(const SymMatrix& P, const Profile1D& h1, const Profile1D& h2, const Grid& grid) {
  require_2d(grid);
  const InclusionCase ic = classify_inclusion(P);
  if (ic.tag != InclusionTag::OppositeSign) {
    throw InputError("solve_opposite_sign needs an opposite-sign dyad, got " + std::string(to_string(ic.tag)));
  }
  const Vec a = *ic.dyad.a, b = *ic.dyad.b;
  const Profile1D H1 = h1.antiderivative(), H2 = h2.antiderivative();
  RigiditySolution out;
  std::vector<double> vals(2 * grid.node_count());
  out.g.resize(grid.node_count());
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const Vec x = grid.node_position(n);
    const double ta = dot(x, a), tb = dot(x, b);
    const double s1 = H1(ta), s2 = H2(tb);
    vals[2 * n] = s1 * b[0] + s2 * a[0];
    vals[2 * n + 1] = s1 * b[1] + s2 * a[1];
    out.g[n] = h1(ta) + h2(tb);
  }
  out.u = DisplacementField(grid, std::move(vals));
  out.residual = inclusion_residual(out.u, P, [&](std::span<const double> x) { return h1(dot(x, a)) + h2(dot(x, b)); });
  return out;
}

namespace {

RigiditySolution degenerate_in_frame(double lambda1, const std::array<std::array<double, 2>, 2>& Q,
                                     const Profile1D& h, const Profile1D& p, const Grid& grid) {
  require_2d(grid);
  if (lambda1 == 0.0 || !std::isfinite(lambda1)) throw InputError("solve_degenerate needs a non-zero lambda1");
  const Profile1D H = h.antiderivative();
  const Profile1D dPp = p.antiderivative();
  const Profile1D Pp = dPp.antiderivative();
  RigiditySolution out;
  std::vector<double> vals(2 * grid.node_count());
  out.g.resize(grid.node_count());
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const Vec x = grid.node_position(n);
    const double y1 = Q[0][0] * x[0] + Q[0][1] * x[1], y2 = Q[1][0] * x[0] + Q[1][1] * x[1];
    const double v1 = lambda1 * (H(y1) + dPp(y1) * y2), v2 = -lambda1 * Pp(y1);
    vals[2 * n] = Q[0][0] * v1 + Q[1][0] * v2;
    vals[2 * n + 1] = Q[0][1] * v1 + Q[1][1] * v2;
    out.g[n] = h(y1) + p(y1) * y2;
  }
  out.u = DisplacementField(grid, std::move(vals));
  SymMatrix P(2);
  P(0, 0) = lambda1 * Q[0][0] * Q[0][0];
  P(0, 1) = lambda1 * Q[0][0] * Q[0][1];
  P(1, 1) = lambda1 * Q[0][1] * Q[0][1];
  out.residual = inclusion_residual(out.u, P, [&](std::span<const double> x) {
    const double y1 = Q[0][0] * x[0] + Q[0][1] * x[1], y2 = Q[1][0] * x[0] + Q[1][1] * x[1];
    return h(y1) + p(y1) * y2;
  });
  return out;
}

}  // namespace

RigiditySolution solve_degenerate(double lambda1, const Profile1D& h, const Profile1D& p, const Grid& grid) {
  return degenerate_in_frame(lambda1, {{{1.0, 0.0}, {0.0, 1.0}}}, h, p, grid);
}

RigiditySolution solve_degenerate(const SymMatrix& P, const Profile1D& h, const Profile1D& p, const Grid& grid) {
  const InclusionCase ic = classify_inclusion(P);
  if (ic.tag != InclusionTag::Degenerate) {
    throw InputError("solve_degenerate needs a rank-one matrix, got " + std::string(to_string(ic.tag)));
  }
  return degenerate_in_frame(ic.lambda1, ic.Q, h, p, grid);
}

namespace {

// Fourth-order derivative of samples along one line; one-sided stencils at
// the ends keep the error O(h^4) everywhere.
double line_derivative(const std::function<double(int)>& v, int i, int n, double h) {
  if (i >= 2 && i <= n - 3) return (-v(i + 2) + 8.0 * v(i + 1) - 8.0 * v(i - 1) + v(i - 2)) / (12.0 * h);
  if (i == 0) return (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) / (12.0 * h);
  if (i == 1) return (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) / (12.0 * h);
  if (i == n - 1) {
    return (25.0 * v(n - 1) - 48.0 * v(n - 2) + 36.0 * v(n - 3) - 16.0 * v(n - 4) + 3.0 * v(n - 5)) / (12.0 * h);
  }
  return (3.0 * v(n - 1) + 10.0 * v(n - 2) - 18.0 * v(n - 3) + 6.0 * v(n - 4) - v(n - 5)) / (12.0 * h);
}

void nodal_gradient(const Grid& grid, const std::vector<double>& g, std::vector<double>& gx, std::vector<double>& gy) {
  const int n0 = grid.nodes(0), n1 = grid.nodes(1);
  if (n0 < 5 || n1 < 5) throw ResolutionError("solve_elliptic needs at least five nodes per axis");
  gx.assign(g.size(), 0.0);
  gy.assign(g.size(), 0.0);
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) {
      const std::size_t k = grid.node_index(i, j);
      gx[k] = line_derivative([&](int ii) { return g[grid.node_index(ii, j)]; }, i, n0, grid.spacing(0));
      gy[k] = line_derivative([&](int jj) { return g[grid.node_index(i, jj)]; }, j, n1, grid.spacing(1));
    }
}

}  // namespace

double elliptic_operator_residual(const SymMatrix& P, const Grid& grid, const std::vector<double>& g) {
  require_2d(grid);
  if (g.size() != grid.node_count()) throw InputError("g must have one value per grid node");
  const int n0 = grid.nodes(0), n1 = grid.nodes(1);
  const double h0 = grid.spacing(0), h1 = grid.spacing(1);
  const auto at = [&](int i, int j) { return g[grid.node_index(i, j)]; };
  double worst = 0.0;
  for (int j = 1; j + 1 < n1; ++j)
    for (int i = 1; i + 1 < n0; ++i) {
      const double g11 = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (h0 * h0);
      const double g22 = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (h1 * h1);
      const double g12 = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * h0 * h1);
      worst = std::max(worst, std::abs(P(1, 1) * g11 - 2.0 * P(0, 1) * g12 + P(0, 0) * g22));
    }
  return worst;
}

std::vector<double> path_integrate(const Grid& grid, const std::vector<double>& gx, const std::vector<double>& gy,
                                   PathOrder order) {
  require_2d(grid);
  if (gx.size() != grid.node_count() || gy.size() != grid.node_count()) {
    throw InputError("path_integrate needs one gradient value per node");
  }
  const int n0 = grid.nodes(0), n1 = grid.nodes(1);
  const double h0 = grid.spacing(0), h1 = grid.spacing(1);
  std::vector<double> f(grid.node_count(), 0.0);
  const auto id = [&](int i, int j) { return grid.node_index(i, j); };
  if (order == PathOrder::RowsThenColumns) {
    for (int i = 1; i < n0; ++i) f[id(i, 0)] = f[id(i - 1, 0)] + 0.5 * h0 * (gx[id(i - 1, 0)] + gx[id(i, 0)]);
    for (int i = 0; i < n0; ++i)
      for (int j = 1; j < n1; ++j) f[id(i, j)] = f[id(i, j - 1)] + 0.5 * h1 * (gy[id(i, j - 1)] + gy[id(i, j)]);
  } else {
    for (int j = 1; j < n1; ++j) f[id(0, j)] = f[id(0, j - 1)] + 0.5 * h1 * (gy[id(0, j - 1)] + gy[id(0, j)]);
    for (int j = 0; j < n1; ++j)
      for (int i = 1; i < n0; ++i) f[id(i, j)] = f[id(i - 1, j)] + 0.5 * h0 * (gx[id(i - 1, j)] + gx[id(i, j)]);
  }
  return f;
}

EllipticSolution solve_elliptic(const SymMatrix& P, const Grid& grid, const std::vector<double>& g, PathOrder order) {
  require_2d(grid);
  const InclusionCase ic = classify_inclusion(P);
  if (ic.tag != InclusionTag::Elliptic) {
    throw InputError("solve_elliptic needs a same-sign matrix, got " + std::string(to_string(ic.tag)));
  }
  if (g.size() != grid.node_count()) throw InputError("g must have one value per grid node");
  double gmax = 0.0;
  for (double v : g) {
    if (!std::isfinite(v)) throw InputError("g must be finite");
    gmax = std::max(gmax, std::abs(v));
  }
  EllipticSolution out;
  const double h = grid.max_spacing();
  out.tolerance = 10.0 * h * h * gmax * (std::abs(ic.lambda1) + std::abs(ic.lambda2));
  out.residual_pde = elliptic_operator_residual(P, grid, g);
  if (out.residual_pde > out.tolerance) {
    throw NotSolvable("A_P g does not vanish: residual " + std::to_string(out.residual_pde) + " exceeds tolerance " +
                          std::to_string(out.tolerance),
                      out.residual_pde);
  }
  std::vector<double> gx, gy;
  nodal_gradient(grid, g, gx, gy);
  const std::size_t N = grid.node_count();
  std::vector<double> fx(N), fy(N);
  for (std::size_t k = 0; k < N; ++k) {
    fx[k] = P(0, 1) * gx[k] - P(0, 0) * gy[k];
    fy[k] = P(1, 1) * gx[k] - P(0, 1) * gy[k];
  }
  out.f = path_integrate(grid, fx, fy, order);
  std::vector<double> u11(N), u12(N), u21(N), u22(N);
  for (std::size_t k = 0; k < N; ++k) {
    u11[k] = P(0, 0) * g[k];
    u12[k] = P(0, 1) * g[k] - out.f[k];
    u21[k] = P(0, 1) * g[k] + out.f[k];
    u22[k] = P(1, 1) * g[k];
  }
  const std::vector<double> c1 = path_integrate(grid, u11, u12, order), c2 = path_integrate(grid, u21, u22, order);
  std::vector<double> vals(2 * N);
  for (std::size_t k = 0; k < N; ++k) {
    vals[2 * k] = c1[k];
    vals[2 * k + 1] = c2[k];
  }
  out.u = DisplacementField(grid, std::move(vals));
  std::vector<double> g_cell(grid.cell_count());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    double s = 0.0;
    for (std::size_t node : grid.cell_corners(c)) s += g[node];
    g_cell[c] = 0.25 * s;
  }
  out.residual_incl = residual_against(out.u, P, g_cell);
  return out;
}

}  // namespace bdlab
