#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bdlab/geometry.hpp"
#include "bdlab/grid.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

/// An oriented interface across which the displacement jumps by
/// `jump = u+ - u-`, the plus side being the one the normal points into.
///
/// In 2D the geometry is a polyline (one SurfacePiece per segment); in 3D it
/// is a single convex planar polygon.
struct JumpInterface {
  std::vector<Vec> vertices;
  Vec jump;
  std::vector<SurfacePiece> pieces;

  static JumpInterface polyline(std::vector<Vec> vertices, Vec jump);
  static JumpInterface polygon(std::vector<Vec> vertices, Vec jump);

  int dim() const { return static_cast<int>(jump.size()); }
  double measure() const;
  /// Signed distance to the nearest piece.
  double signed_distance(std::span<const double> x) const;
};

/// Grid-sampled displacement with explicit jump interfaces.
///
/// Values are stored node-major with the d components of a node contiguous.
/// Nodes lying on an interface carry the minus-side value.
class DisplacementField {
 public:
  DisplacementField() = default;
  DisplacementField(Grid grid, std::vector<double> values, std::vector<JumpInterface> jumps = {});

  /// Zero field on `grid`.
  static DisplacementField zero(Grid grid);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<JumpInterface>& jumps() const noexcept { return jumps_; }

  std::span<const double> at(std::size_t node) const {
    return {values_.data() + node * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  std::span<double> at(std::size_t node) {
    return {values_.data() + node * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }

  /// True when the node lies strictly on the plus side of interface `k`.
  bool on_plus_side(std::size_t node, std::size_t k) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<JumpInterface> jumps_;
};

using VectorFunction = std::function<Vec(std::span<const double>)>;

/// Sample `fn` at the grid nodes. A node within rounding distance of an
/// interface is evaluated slightly on the minus side, so that the stored
/// value follows the minus-side convention.
DisplacementField sample_field(const Grid& grid, const VectorFunction& fn, std::vector<JumpInterface> jumps = {});

/// Per-cell symmetrized gradient.
///
/// Each cell gets the compact 2^d-corner difference quotient at its centre,
/// which is exact for affine fields and second order for smooth ones. Cells
/// touched by an interface are flagged in `cut`; their value is computed
/// from corner data with the jump removed on the plus side.
struct CellGradient {
  std::vector<SymMatrix> sym;
  std::vector<std::uint8_t> cut;
  std::size_t cut_count() const;
};
CellGradient sym_gradient(const DisplacementField& u);

/// Full (non-symmetric) gradient per cell, row i = d u_i.
std::vector<std::vector<Vec>> cell_full_gradient(const DisplacementField& u);

/// Max over interior cell-centre stencils of
///   | d_k W_ij - (d_j E_ik - d_i E_jk) |,  W = skew part of grad u.
double w_identity_residual(const DisplacementField& u);

struct RigidFit {
  Vec u0;
  std::vector<Vec> R;  // skew-symmetric
  double residual = 0.0;
};

/// Least-squares fit u(x) ~ u0 + R x with R skew over all nodes. The
/// residual is the root-mean-square misfit per node.
RigidFit fit_rigid(const DisplacementField& u);

/// u - (u0 + R x) at every node; jumps are kept.
DisplacementField subtract_rigid(const DisplacementField& u, const RigidFit& fit);

}  // namespace bdlab
