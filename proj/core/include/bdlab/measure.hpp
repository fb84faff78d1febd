#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bdlab/fields.hpp"
#include "bdlab/geometry.hpp"
#include "bdlab/grid.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

/// Surface part of a matrix-valued measure: `amplitude` per unit
/// (d-1)-measure of `piece`.
struct SurfaceAtom {
  SurfacePiece piece;
  SymMatrix amplitude;
  /// Index of the JumpInterface the atom came from, or -1.
  int source = -1;
};

struct PointAtom {
  Vec location;
  SymMatrix value;
};

/// Matrix-valued measure: piecewise-constant density on grid cells plus
/// surface and point atoms.
struct SymMeasure {
  Grid grid;
  std::vector<SymMatrix> density;
  std::vector<SurfaceAtom> surface;
  std::vector<PointAtom> points;

  int dim() const { return grid.dim(); }
  static SymMeasure zero(const Grid& grid);
  static SymMeasure uniform(const Grid& grid, const SymMatrix& value);
};

/// Eu as density plus one surface atom per interface piece with amplitude
/// (u+ - u-) (.) n. Throws InputError when two interfaces overlap along a
/// set of positive length.
SymMeasure assemble_symmetrized_measure(const DisplacementField& u);

double absolutely_continuous_mass(const SymMeasure& mu);
double singular_mass(const SymMeasure& mu);
/// |mu|(box).
double total_variation(const SymMeasure& mu);

/// |mu|(B(center, r)) with exact cell/ball and piece/ball intersections.
double mass_in_ball(const SymMeasure& mu, std::span<const double> center, double r);
/// |mu|([lo, hi]).
double mass_in_box(const SymMeasure& mu, std::span<const double> lo, std::span<const double> hi);

/// Unit-norm polar of a non-zero matrix.
SymMatrix polar(const SymMatrix& m);

struct BlowUp {
  SymMeasure measure;
  /// |result| outside [-1, 1]^d.
  double clipped_mass = 0.0;
};

/// c * T_* mu with T(x) = (x - x0) / r. The density is scaled by c r^d,
/// surface amplitudes by c r^(d-1), point atoms by c.
BlowUp blow_up(const SymMeasure& mu, std::span<const double> x0, double r, double c);

struct DoublingScan {
  std::vector<double> radii;
  /// |mu|(B(x0, t r)) / |mu|(B(x0, r)); +infinity when the denominator is 0.
  std::vector<double> ratios;
  double sup = 0.0;
  double argmax_radius = 0.0;
};

DoublingScan doubling_scan(const SymMeasure& mu, std::span<const double> x0, double t, std::span<const double> radii);

struct SliceCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Compare |xi^T Eu xi|(box) with the integral over lines parallel to xi
/// of the 1D total variation of xi . u. d = 2 only; xi must be an axis or
/// a diagonal direction, and diagonals need equal spacing.
SliceCheck directional_slice_check(const DisplacementField& u, std::span<const double> xi);

}  // namespace bdlab
