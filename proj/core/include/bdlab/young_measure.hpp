#pragma once

#include <optional>
#include <vector>

#include "bdlab/fields.hpp"
#include "bdlab/geometry.hpp"
#include "bdlab/integrand.hpp"
#include "bdlab/measure.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

struct WeightedMatrix {
  double weight = 0.0;
  SymMatrix value;
};

/// Part of the concentration measure carried by a surface piece (mass
/// spread uniformly along it) or a point.
struct ConcentrationAtom {
  std::optional<SurfacePiece> piece;
  /// Point location, or the piece centroid.
  Vec location;
  double mass = 0.0;
  /// Unit-norm directions with weights summing to 1.
  std::vector<WeightedMatrix> sphere;
};

/// Generalized Young measure on the cells of a grid: an oscillation
/// measure per cell, a concentration measure with a density part and
/// atoms, and the concentration-angle measures.
struct YoungMeasure {
  Grid grid;
  /// Per cell, probability weights.
  std::vector<std::vector<WeightedMatrix>> osc;
  /// Per cell, density of the concentration measure w.r.t. Lebesgue.
  std::vector<double> conc_density;
  /// Per cell angle measure for the density part (empty when the density
  /// vanishes).
  std::vector<std::vector<WeightedMatrix>> conc_sphere;
  std::vector<ConcentrationAtom> conc_atoms;

  /// Throws InputError when weights do not sum to 1, sphere atoms are not
  /// unit norm, or densities are negative.
  void validate(double tol = 1e-12) const;
};

YoungMeasure elementary_ym(const SymMeasure& mu);

/// theta delta_{A_plus} + (1 - theta) delta_{A_minus} in every cell. The
/// difference must be a symmetric tensor product and theta lie in (0, 1).
YoungMeasure laminate_ym(const Grid& grid, const SymMatrix& A_plus, const SymMatrix& A_minus, double theta);

struct PairingReport {
  double bulk_pairing = 0.0;
  double singular_pairing = 0.0;
  double total = 0.0;
  RecessionMode recession_mode = RecessionMode::Strong;
};

PairingReport pair_duality(const Integrand& f, const YoungMeasure& nu, RecessionMode mode = RecessionMode::Strong,
                           const RecessionOptions& ropts = {});

SymMeasure barycenter(const YoungMeasure& nu);

struct JensenSite {
  enum class Kind { Regular, Singular };
  Kind kind = Kind::Regular;
  /// Cell index (regular) or concentration atom index (singular).
  std::size_t index = 0;
};

struct JensenReport {
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs; negative values violate the inequality.
  double gap = 0.0;
  double tolerance = 0.0;
  bool holds = true;
};

/// Regular site: h(<id, nu_x> + <id, nu_x^inf> c) <= <h, nu_x> + <h#, nu_x^inf> c
/// with c the concentration density. Singular site:
/// h#(<id, nu^inf>) <= <h#, nu^inf>. h# is the upper recession function.
JensenReport jensen_check(const YoungMeasure& nu, const Integrand& h, JensenSite site, double tol_factor = 1e-9,
                          const RecessionOptions& ropts = {});

struct StaircaseResult {
  DisplacementField u;
  /// L1 distance of u_n to the closest map T x + c.
  double dist_to_affine = 0.0;
  /// T = q1 b (x) a + q2 a (x) b, row-major.
  std::vector<Vec> affine;
  /// Symmetric part of T, (q1 + q2) a (.) b.
  SymMatrix target;
  /// Singular mass sitting on internal tile boundaries.
  double gluing_mass = 0.0;
};

/// Tile a cell field v n times per axis, add the staircase q1 k b + q2 l a
/// on tile (k, l) and rescale by 1/n on the same box.
///
/// The cell is the grid box of v with a = alpha e1 and b = beta e2 its face
/// normals, so the box has side lengths 1/alpha and 1/beta. Traces must
/// satisfy v(right) - v(left) = q1 b and v(top) - v(bottom) = q2 a at every
/// pair of facing nodes.
StaircaseResult staircase_average(const DisplacementField& v, const Vec& a, const Vec& b, double q1, double q2,
                                  int n, double tol = 1e-9);

struct EmpiricalOptions {
  /// Window size in cells per axis; must divide the cell counts.
  int window = 1;
  int bins = 32;
  /// Strains with norm above cutoff_factor * median are concentration.
  double cutoff_factor = 10.0;
};

/// Histogram the strains of a sequence of fields on a shared grid.
YoungMeasure empirical_ym(const std::vector<DisplacementField>& seq, const EmpiricalOptions& opts = {});

}  // namespace bdlab
