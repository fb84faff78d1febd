#include "bdlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bdlab/error.hpp"

namespace bdlab {

SymMeasure SymMeasure::zero(const Grid& grid) { return uniform(grid, SymMatrix::zero(grid.dim())); }

SymMeasure SymMeasure::uniform(const Grid& grid, const SymMatrix& value) {
  if (value.dim() != grid.dim()) throw InputError("measure density dimension differs from grid");
  SymMeasure mu;
  mu.grid = grid;
  mu.density.assign(grid.cell_count(), value);
  return mu;
}

namespace {

bool segments_overlap(const SurfacePiece& a, const SurfacePiece& b, double eps) {
  const auto& p = a.vertices[0];
  const auto& q = a.vertices[1];
  const double t0 = q[0] - p[0], t1 = q[1] - p[1];
  const double len = std::hypot(t0, t1);
  const auto off = [&](const Vec& x) { return ((x[0] - p[0]) * t1 - (x[1] - p[1]) * t0) / len; };
  if (std::abs(off(b.vertices[0])) > eps || std::abs(off(b.vertices[1])) > eps) return false;
  const auto proj = [&](const Vec& x) { return ((x[0] - p[0]) * t0 + (x[1] - p[1]) * t1) / len; };
  const double s0 = proj(b.vertices[0]), s1 = proj(b.vertices[1]);
  const double lo = std::max(0.0, std::min(s0, s1));
  const double hi = std::min(len, std::max(s0, s1));
  return hi - lo > eps;
}

bool polygons_overlap(const SurfacePiece& a, const SurfacePiece& b, double eps) {
  if (std::abs(std::abs(dot(a.normal, b.normal)) - 1.0) > 1e-12) return false;
  Vec w(3);
  for (int k = 0; k < 3; ++k) w[k] = b.vertices[0][k] - a.vertices[0][k];
  if (std::abs(dot(w, a.normal)) > eps) return false;
  const auto inside = [&](const SurfacePiece& poly, const Vec& x) {
    return std::abs(signed_distance(poly, x)) <= eps;
  };
  for (const auto& v : b.vertices) {
    if (inside(a, v)) return true;
  }
  for (const auto& v : a.vertices) {
    if (inside(b, v)) return true;
  }
  return inside(a, piece_centroid(b)) || inside(b, piece_centroid(a));
}

void check_overlaps(const DisplacementField& u) {
  const double eps = 1e-9 * u.grid().max_spacing();
  const auto& jumps = u.jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    for (std::size_t j = i; j < jumps.size(); ++j) {
      for (std::size_t pi = 0; pi < jumps[i].pieces.size(); ++pi) {
        for (std::size_t pj = (i == j ? pi + 1 : 0); pj < jumps[j].pieces.size(); ++pj) {
          const auto& a = jumps[i].pieces[pi];
          const auto& b = jumps[j].pieces[pj];
          const bool overlap = a.dim() == 2 ? segments_overlap(a, b, eps) : polygons_overlap(a, b, eps);
          if (overlap) {
            throw InputError("jump interfaces " + std::to_string(i) + " and " + std::to_string(j) +
                             " overlap");
          }
        }
      }
    }
  }
}

// Distance from `center` to the box and to its farthest corner.
std::pair<double, double> box_distance_range(std::span<const double> lo, std::span<const double> hi,
                                             std::span<const double> center) {
  double near2 = 0.0, far2 = 0.0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    const double c = center[k];
    const double dn = c < lo[k] ? lo[k] - c : (c > hi[k] ? c - hi[k] : 0.0);
    const double df = std::max(std::abs(c - lo[k]), std::abs(c - hi[k]));
    near2 += dn * dn;
    far2 += df * df;
  }
  return {std::sqrt(near2), std::sqrt(far2)};
}

}  // namespace

SymMeasure assemble_symmetrized_measure(const DisplacementField& u) {
  check_overlaps(u);
  SymMeasure mu;
  mu.grid = u.grid();
  mu.density = sym_gradient(u).sym;
  for (std::size_t k = 0; k < u.jumps().size(); ++k) {
    const auto& jump = u.jumps()[k];
    for (const auto& piece : jump.pieces) {
      mu.surface.push_back({piece, sym_dyad(jump.jump, piece.normal), static_cast<int>(k)});
    }
  }
  return mu;
}

double absolutely_continuous_mass(const SymMeasure& mu) {
  double s = 0.0;
  for (const auto& m : mu.density) s += m.norm();
  return s * mu.grid.cell_volume();
}

double singular_mass(const SymMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.surface) s += a.amplitude.norm() * piece_measure(a.piece);
  for (const auto& p : mu.points) s += p.value.norm();
  return s;
}

double total_variation(const SymMeasure& mu) { return absolutely_continuous_mass(mu) + singular_mass(mu); }

double mass_in_ball(const SymMeasure& mu, std::span<const double> center, double r) {
  if (!(r > 0)) return 0.0;
  const Grid& g = mu.grid;
  double s = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const double dens = mu.density[c].norm();
    if (dens == 0.0) continue;
    const Vec lo = g.cell_lower(c), hi = g.cell_upper(c);
    const auto [near, far] = box_distance_range(lo, hi, center);
    if (near >= r) continue;
    const double vol = far <= r ? g.cell_volume() : box_ball_volume(lo, hi, center, r);
    s += dens * vol;
  }
  for (const auto& a : mu.surface) s += a.amplitude.norm() * piece_ball_measure(a.piece, center, r);
  for (const auto& p : mu.points) {
    Vec w(p.location.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = p.location[k] - center[k];
    if (euclidean_norm(w) <= r) s += p.value.norm();
  }
  return s;
}

double mass_in_box(const SymMeasure& mu, std::span<const double> lo, std::span<const double> hi) {
  const Grid& g = mu.grid;
  const int d = g.dim();
  double s = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const double dens = mu.density[c].norm();
    if (dens == 0.0) continue;
    const Vec clo = g.cell_lower(c), chi = g.cell_upper(c);
    double vol = 1.0;
    for (int k = 0; k < d && vol > 0; ++k) vol *= std::max(0.0, std::min(hi[k], chi[k]) - std::max(lo[k], clo[k]));
    s += dens * vol;
  }
  for (const auto& a : mu.surface) s += a.amplitude.norm() * piece_box_measure(a.piece, lo, hi);
  for (const auto& p : mu.points) {
    bool in = true;
    for (int k = 0; k < d; ++k) in = in && p.location[k] >= lo[k] && p.location[k] <= hi[k];
    if (in) s += p.value.norm();
  }
  return s;
}

SymMatrix polar(const SymMatrix& m) {
  const double n = m.norm();
  if (!(n > 0)) throw InputError("polar of the zero matrix is undefined");
  return m / n;
}

BlowUp blow_up(const SymMeasure& mu, std::span<const double> x0, double r, double c) {
  if (!(r > 0) || !(c > 0)) throw InputError("blow_up needs r > 0 and c > 0");
  const int d = mu.dim();
  if (static_cast<int>(x0.size()) != d) throw InputError("blow_up: x0 has wrong dimension");
  const auto T = [&](std::span<const double> x) {
    Vec y(d);
    for (int k = 0; k < d; ++k) y[k] = (x[k] - x0[k]) / r;
    return y;
  };
  BlowUp out;
  SymMeasure& nu = out.measure;
  nu.grid = Grid(T(mu.grid.lo()), T(mu.grid.hi()), mu.grid.node_counts());
  const double dens_scale = c * std::pow(r, d);
  const double surf_scale = c * std::pow(r, d - 1);
  nu.density.reserve(mu.density.size());
  for (const auto& m : mu.density) nu.density.push_back(m * dens_scale);
  for (const auto& a : mu.surface) {
    std::vector<Vec> verts;
    for (const auto& v : a.piece.vertices) verts.push_back(T(v));
    nu.surface.push_back({make_piece(std::move(verts)), a.amplitude * surf_scale, a.source});
  }
  for (const auto& p : mu.points) nu.points.push_back({T(p.location), p.value * c});
  const Vec lo(d, -1.0), hi(d, 1.0);
  out.clipped_mass = std::max(0.0, total_variation(nu) - mass_in_box(nu, lo, hi));
  return out;
}

DoublingScan doubling_scan(const SymMeasure& mu, std::span<const double> x0, double t, std::span<const double> radii) {
  if (!(t > 1)) throw InputError("doubling_scan needs t > 1");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw InputError("doubling_scan radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InputError("doubling_scan radii must be decreasing");
  }
  DoublingScan scan;
  scan.radii.assign(radii.begin(), radii.end());
  scan.sup = -std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double den = mass_in_ball(mu, x0, r);
    const double ratio = den > 0 ? mass_in_ball(mu, x0, t * r) / den : std::numeric_limits<double>::infinity();
    scan.ratios.push_back(ratio);
    if (ratio > scan.sup) {
      scan.sup = ratio;
      scan.argmax_radius = r;
    }
  }
  return scan;
}

SliceCheck directional_slice_check(const DisplacementField& u, std::span<const double> xi_in) {
  const Grid& g = u.grid();
  if (g.dim() != 2) throw InputError("directional_slice_check is 2D only");
  if (xi_in.size() != 2 || std::abs(euclidean_norm(xi_in) - 1.0) > 1e-9) {
    throw InputError("slice direction must be a 2D unit vector");
  }
  const Vec xi(xi_in.begin(), xi_in.end());
  const double tol = 1e-12;
  int axis = -1;
  bool diagonal = false;
  if (std::abs(std::abs(xi[0]) - 1.0) < tol) axis = 0;
  else if (std::abs(std::abs(xi[1]) - 1.0) < tol) axis = 1;
  else if (std::abs(std::abs(xi[0]) - std::numbers::sqrt2 / 2) < 1e-9 &&
           std::abs(std::abs(xi[1]) - std::numbers::sqrt2 / 2) < 1e-9)
    diagonal = true;
  if (axis < 0 && !diagonal) throw InputError("slice direction must be an axis or a diagonal");
  if (diagonal && std::abs(g.spacing(0) - g.spacing(1)) > 1e-12 * g.spacing(0)) {
    throw InputError("diagonal slices need equal spacing on both axes");
  }

  SliceCheck out;
  const SymMeasure mu = assemble_symmetrized_measure(u);
  for (const auto& m : mu.density) out.lhs += std::abs(m.quadratic_form(xi));
  out.lhs *= g.cell_volume();
  for (const auto& a : mu.surface) out.lhs += std::abs(a.amplitude.quadratic_form(xi)) * piece_measure(a.piece);

  const int n0 = g.nodes(0), n1 = g.nodes(1);
  const auto proj = [&](int i, int j) {
    const auto v = u.at(g.node_index(i, j));
    return xi[0] * v[0] + xi[1] * v[1];
  };
  if (!diagonal) {
    const int other = 1 - axis;
    const int nl = g.nodes(other), na = g.nodes(axis);
    for (int l = 0; l < nl; ++l) {
      double tv = 0.0;
      for (int s = 0; s + 1 < na; ++s) {
        tv += axis == 0 ? std::abs(proj(s + 1, l) - proj(s, l)) : std::abs(proj(l, s + 1) - proj(l, s));
      }
      const double w = (l == 0 || l == nl - 1) ? 0.5 : 1.0;
      out.rhs += w * tv * g.spacing(other);
    }
    return out;
  }
  const int dj = xi[0] * xi[1] > 0 ? 1 : -1;
  double sum = 0.0;
  for (int i = 0; i + 1 < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const int jn = j + dj;
      if (jn < 0 || jn >= n1) continue;
      sum += std::abs(proj(i + 1, jn) - proj(i, j));
    }
  }
  out.rhs = sum * g.spacing(0) / std::numbers::sqrt2;
  return out;
}

}  // namespace bdlab
