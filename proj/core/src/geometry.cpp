#include "bdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdlab/error.hpp"

namespace bdlab {

namespace {

struct P2 {
  double x, y;
};

P2 operator-(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
P2 operator+(P2 a, P2 b) { return {a.x + b.x, a.y + b.y}; }
P2 operator*(double s, P2 a) { return {s * a.x, s * a.y}; }
double cross(P2 a, P2 b) { return a.x * b.y - a.y * b.x; }
double dot2(P2 a, P2 b) { return a.x * b.x + a.y * b.y; }

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Signed area of disk(0, r) intersected with triangle (0, a, b).
double triangle_disk_area(P2 a, P2 b, double r) {
  const auto sector = [r](P2 u, P2 v) { return 0.5 * r * r * std::atan2(cross(u, v), dot2(u, v)); };
  const double r2 = r * r;
  const bool a_in = dot2(a, a) <= r2;
  const bool b_in = dot2(b, b) <= r2;
  if (a_in && b_in) return 0.5 * cross(a, b);
  const P2 d = b - a;
  const double qa = dot2(d, d);
  if (qa == 0.0) return 0.0;
  const double qb = dot2(a, d);
  const double qc = dot2(a, a) - r2;
  const double disc = qb * qb - qa * qc;
  if (disc <= 0.0) return sector(a, b);
  const double s = std::sqrt(disc);
  const double t1 = (-qb - s) / qa;
  const double t2 = (-qb + s) / qa;
  if (t2 <= 0.0 || t1 >= 1.0) return sector(a, b);
  const P2 p1 = a + std::max(t1, 0.0) * d;
  const P2 p2 = a + std::min(t2, 1.0) * d;
  return sector(a, p1) + 0.5 * cross(p1, p2) + sector(p2, b);
}

// Liang-Barsky clip of the segment p + t (q - p), t in [0, 1], against a box.
// Returns false when the segment misses the box.
bool clip_segment(std::span<const double> p, std::span<const double> q, std::span<const double> lo,
                  std::span<const double> hi, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = q[k] - p[k];
    if (d == 0.0) {
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - p[k]) / d;
    double tb = (hi[k] - p[k]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

std::vector<Vec> clip_polygon_halfspace(const std::vector<Vec>& poly, int axis, double bound, bool keep_above) {
  std::vector<Vec> out;
  if (poly.empty()) return out;
  const auto inside = [&](const Vec& v) { return keep_above ? v[axis] >= bound : v[axis] <= bound; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec& cur = poly[i];
    const Vec& prev = poly[(i + poly.size() - 1) % poly.size()];
    const bool cin = inside(cur), pin = inside(prev);
    if (cin != pin) {
      const double t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
      Vec x(cur.size());
      for (std::size_t k = 0; k < cur.size(); ++k) x[k] = prev[k] + t * (cur[k] - prev[k]);
      x[axis] = bound;
      out.push_back(std::move(x));
    }
    if (cin) out.push_back(cur);
  }
  return out;
}

std::vector<Vec> clip_polygon_box(std::vector<Vec> poly, std::span<const double> lo, std::span<const double> hi) {
  for (int k = 0; k < static_cast<int>(lo.size()); ++k) {
    poly = clip_polygon_halfspace(poly, k, lo[k], true);
    poly = clip_polygon_halfspace(poly, k, hi[k], false);
  }
  return poly;
}

double point_segment_distance(std::span<const double> x, std::span<const double> p, std::span<const double> q,
                              Vec* nearest = nullptr) {
  const Vec d = sub(q, p);
  const Vec w = sub(x, p);
  const double dd = dot(d, d);
  double t = dd > 0 ? std::clamp(dot(w, d) / dd, 0.0, 1.0) : 0.0;
  Vec y(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) y[k] = p[k] + t * d[k];
  const double dist = euclidean_norm(sub(x, y));
  if (nearest) *nearest = std::move(y);
  return dist;
}

// Orthonormal basis (u, v) of the plane with normal n.
std::pair<Vec, Vec> plane_basis(const Vec& n) {
  Vec helper = std::abs(n[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
  Vec u = cross3(n, helper);
  const double un = euclidean_norm(u);
  for (auto& c : u) c /= un;
  Vec v = cross3(n, u);
  return {u, v};
}

}  // namespace

SurfacePiece make_piece(std::vector<Vec> vertices) {
  if (vertices.size() < 2) throw InputError("surface piece needs at least two vertices");
  const std::size_t d = vertices[0].size();
  for (const auto& v : vertices) {
    if (v.size() != d) throw InputError("surface piece vertices have inconsistent dimension");
  }
  SurfacePiece piece;
  if (d == 2) {
    if (vertices.size() != 2) throw InputError("2D surface pieces are segments (two vertices)");
    const double tx = vertices[1][0] - vertices[0][0];
    const double ty = vertices[1][1] - vertices[0][1];
    const double len = std::hypot(tx, ty);
    if (!(len > 0)) throw InputError("degenerate segment");
    piece.normal = {ty / len, -tx / len};
  } else if (d == 3) {
    if (vertices.size() < 3) throw InputError("3D surface pieces are polygons (>= 3 vertices)");
    Vec n(3, 0.0);
    for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
      const Vec c = cross3(sub(vertices[i], vertices[0]), sub(vertices[i + 1], vertices[0]));
      for (int k = 0; k < 3; ++k) n[k] += c[k];
    }
    const double nn = euclidean_norm(n);
    if (!(nn > 0)) throw InputError("degenerate polygon");
    for (auto& c : n) c /= nn;
    for (const auto& v : vertices) {
      if (std::abs(dot(sub(v, vertices[0]), n)) > 1e-9 * (1.0 + euclidean_norm(v))) {
        throw InputError("polygon vertices are not coplanar");
      }
    }
    piece.normal = std::move(n);
  } else {
    throw InputError("surface pieces are supported in dimensions 2 and 3");
  }
  piece.vertices = std::move(vertices);
  return piece;
}

double polygon_area(const std::vector<Vec>& polygon) {
  if (polygon.size() < 3) return 0.0;
  if (polygon[0].size() == 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      const auto& a = polygon[i];
      const auto& b = polygon[(i + 1) % polygon.size()];
      s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * std::abs(s);
  }
  Vec acc(3, 0.0);
  for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
    const Vec c = cross3(sub(polygon[i], polygon[0]), sub(polygon[i + 1], polygon[0]));
    for (int k = 0; k < 3; ++k) acc[k] += c[k];
  }
  return 0.5 * euclidean_norm(acc);
}

double piece_measure(const SurfacePiece& piece) {
  if (piece.dim() == 2) return euclidean_norm(sub(piece.vertices[1], piece.vertices[0]));
  return polygon_area(piece.vertices);
}

Vec piece_centroid(const SurfacePiece& piece) {
  Vec c(piece.dim(), 0.0);
  for (const auto& v : piece.vertices)
    for (int k = 0; k < piece.dim(); ++k) c[k] += v[k];
  for (auto& x : c) x /= static_cast<double>(piece.vertices.size());
  return c;
}

double polygon_disk_area(const std::vector<Vec>& polygon, std::span<const double> center, double r) {
  if (r <= 0 || polygon.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    s += triangle_disk_area({a[0] - center[0], a[1] - center[1]}, {b[0] - center[0], b[1] - center[1]}, r);
  }
  return std::abs(s);
}

double piece_ball_measure(const SurfacePiece& piece, std::span<const double> center, double r) {
  if (r <= 0) return 0.0;
  if (piece.dim() == 2) {
    const auto& p = piece.vertices[0];
    const auto& q = piece.vertices[1];
    const Vec d = sub(q, p);
    const Vec w = sub(p, center);
    const double qa = dot(d, d);
    const double qb = dot(w, d);
    const double qc = dot(w, w) - r * r;
    const double disc = qb * qb - qa * qc;
    if (disc <= 0) return 0.0;
    const double s = std::sqrt(disc);
    const double t0 = std::max(0.0, (-qb - s) / qa);
    const double t1 = std::min(1.0, (-qb + s) / qa);
    return t1 > t0 ? (t1 - t0) * std::sqrt(qa) : 0.0;
  }
  const double offset = dot(sub(center, piece.vertices[0]), piece.normal);
  if (std::abs(offset) >= r) return 0.0;
  const double rho = std::sqrt(r * r - offset * offset);
  const auto [u, v] = plane_basis(piece.normal);
  std::vector<Vec> local;
  local.reserve(piece.vertices.size());
  for (const auto& x : piece.vertices) {
    const Vec w = sub(x, center);
    local.push_back({dot(w, u), dot(w, v)});
  }
  const double origin[2] = {0.0, 0.0};
  return polygon_disk_area(local, origin, rho);
}

double piece_box_measure(const SurfacePiece& piece, std::span<const double> lo, std::span<const double> hi) {
  if (piece.dim() == 2) {
    double t0, t1;
    if (!clip_segment(piece.vertices[0], piece.vertices[1], lo, hi, t0, t1)) return 0.0;
    return (t1 - t0) * piece_measure(piece);
  }
  return polygon_area(clip_polygon_box(piece.vertices, lo, hi));
}

bool piece_intersects_box(const SurfacePiece& piece, std::span<const double> lo, std::span<const double> hi,
                          double slack) {
  Vec elo(lo.begin(), lo.end()), ehi(hi.begin(), hi.end());
  for (std::size_t k = 0; k < elo.size(); ++k) {
    elo[k] -= slack;
    ehi[k] += slack;
  }
  if (piece.dim() == 2) {
    double t0, t1;
    return clip_segment(piece.vertices[0], piece.vertices[1], elo, ehi, t0, t1);
  }
  return !clip_polygon_box(piece.vertices, elo, ehi).empty();
}

double signed_distance(const SurfacePiece& piece, std::span<const double> x) {
  if (piece.dim() == 2) {
    Vec y;
    const double dist = point_segment_distance(x, piece.vertices[0], piece.vertices[1], &y);
    const double side = dot(sub(x, y), piece.normal);
    return side > 0 ? dist : -dist;
  }
  const double offset = dot(sub(x, piece.vertices[0]), piece.normal);
  Vec y(3);
  for (int k = 0; k < 3; ++k) y[k] = x[k] - offset * piece.normal[k];
  bool inside = true;
  const std::size_t m = piece.vertices.size();
  for (std::size_t i = 0; i < m && inside; ++i) {
    const Vec e = sub(piece.vertices[(i + 1) % m], piece.vertices[i]);
    const Vec w = sub(y, piece.vertices[i]);
    if (dot(cross3(e, w), piece.normal) < 0) inside = false;
  }
  double dist = std::abs(offset);
  if (!inside) {
    dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      dist = std::min(dist, point_segment_distance(x, piece.vertices[i], piece.vertices[(i + 1) % m]));
    }
  }
  return offset > 0 ? dist : -dist;
}

double box_ball_volume(std::span<const double> lo, std::span<const double> hi, std::span<const double> center,
                       double r) {
  if (r <= 0) return 0.0;
  const auto rect = [](double x0, double y0, double x1, double y1) {
    return std::vector<Vec>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  };
  if (lo.size() == 1) {
    return std::max(0.0, std::min(hi[0], center[0] + r) - std::max(lo[0], center[0] - r));
  }
  if (lo.size() == 2) return polygon_disk_area(rect(lo[0], lo[1], hi[0], hi[1]), center, r);
  const double z0 = std::max(lo[2], center[2] - r);
  const double z1 = std::min(hi[2], center[2] + r);
  if (!(z1 > z0)) return 0.0;
  const auto poly = rect(lo[0], lo[1], hi[0], hi[1]);
  const auto slice = [&](double z) {
    const double dz = z - center[2];
    const double rho2 = r * r - dz * dz;
    return rho2 > 0 ? polygon_disk_area(poly, center.subspan(0, 2), std::sqrt(rho2)) : 0.0;
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(slice, z0, z1, 12, 1e-13);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace bdlab
