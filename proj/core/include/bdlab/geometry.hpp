#pragma once

#include <span>
#include <vector>

#include "bdlab/symtensor.hpp"

namespace bdlab {

/// A flat piece of a (d-1)-dimensional interface: a segment in 2D or a
/// convex planar polygon in 3D, together with its unit normal.
///
/// In 2D the normal of the segment p -> q is the tangent rotated clockwise,
/// n = (t_2, -t_1) / |t|, so the plus side lies to the right when walking
/// from p to q. In 3D the normal follows the right-hand rule on the vertex
/// order.
struct SurfacePiece {
  std::vector<Vec> vertices;
  Vec normal;

  int dim() const { return static_cast<int>(normal.size()); }
};

/// Build a piece from its vertices, computing the oriented normal. Throws
/// InputError for degenerate (zero-measure) geometry.
SurfacePiece make_piece(std::vector<Vec> vertices);

/// Length (2D) or area (3D).
double piece_measure(const SurfacePiece& piece);
Vec piece_centroid(const SurfacePiece& piece);

/// (d-1)-measure of the piece inside the closed ball B(center, r).
double piece_ball_measure(const SurfacePiece& piece, std::span<const double> center, double r);
/// (d-1)-measure of the piece inside the closed box [lo, hi].
double piece_box_measure(const SurfacePiece& piece, std::span<const double> lo,
                         std::span<const double> hi);
bool piece_intersects_box(const SurfacePiece& piece, std::span<const double> lo,
                          std::span<const double> hi, double slack);

/// Signed distance to the piece: |x - nearest point|, with the sign of
/// (x - nearest) . n (or of the plane offset in 3D).
double signed_distance(const SurfacePiece& piece, std::span<const double> x);

/// Area of the intersection of a simple polygon (counter-clockwise or
/// clockwise, 2D) with the disk B(center, r). Exact up to rounding.
double polygon_disk_area(const std::vector<Vec>& polygon, std::span<const double> center, double r);

/// Volume (3D) or area (2D) of box [lo, hi] intersected with the ball B(center, r).
/// 2D is closed form; 3D integrates exact slice areas adaptively.
double box_ball_volume(std::span<const double> lo, std::span<const double> hi,
                       std::span<const double> center, double r);

/// Area of a planar polygon in 2D or 3D.
double polygon_area(const std::vector<Vec>& polygon);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace bdlab
