#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "bdlab/error.hpp"
#include "bdlab/fields.hpp"
#include "bdlab/grid.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

enum class InclusionTag { Trivial, OppositeSign, Degenerate, Elliptic };

std::string_view to_string(InclusionTag tag);

/// Case of the inclusion Eu in span{P} for a 2x2 symmetric P.
struct InclusionCase {
  InclusionTag tag = InclusionTag::Trivial;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  /// Rows are eigenvectors: Q P Q^T = diag(lambda1, lambda2). In the
  /// degenerate case lambda2 is the vanishing eigenvalue.
  std::array<std::array<double, 2>, 2> Q{{{1.0, 0.0}, {0.0, 1.0}}};
  DyadClass dyad;
};

InclusionCase classify_inclusion(const SymMatrix& P, double tol = kDefaultDyadTol);

/// Samples of a scalar function on a uniform 1D grid. Values between nodes
/// come from cubic Hermite interpolation with slopes from the profile's own
/// derivative data.
class Profile1D {
 public:
  Profile1D() = default;
  /// Slopes are estimated by second-order finite differences.
  Profile1D(double lo, double hi, std::vector<double> values);
  Profile1D(double lo, double hi, std::vector<double> values, std::vector<double> slopes);

  static Profile1D sample(const std::function<double(double)>& fn, double lo, double hi, int n);
  /// Covers the range of x . dir over the grid box with `refine` times the
  /// grid's finest node density along that range.
  static Profile1D over_projection(const std::function<double(double)>& fn, const Grid& grid,
                                   std::array<double, 2> dir, int refine = 4);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double spacing() const noexcept { return (hi_ - lo_) / static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }

  double operator()(double t) const;
  double derivative(double t) const;
  /// H with H(lo) = 0 and H' = this, by cumulative trapezoid.
  Profile1D antiderivative() const;

 private:
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

struct RigiditySolution {
  DisplacementField u;
  /// g at the grid nodes.
  std::vector<double> g;
  /// Max-norm of sym_gradient(u) - P g over cells.
  double residual = 0.0;
};

/// u(x) = H1(x . a) b + H2(x . b) a with P = a (.) b from classify_dyad and
/// g(x) = h1(x . a) + h2(x . b).
RigiditySolution solve_opposite_sign(const SymMatrix& P, const Profile1D& h1, const Profile1D& h2, const Grid& grid);

/// P = diag(lambda1, 0): g(x) = h(x1) + p(x1) x2 and
/// u(x) = lambda1 (H(x1) + Pp'(x1) x2, -Pp(x1)) with Pp'' = p.
RigiditySolution solve_degenerate(double lambda1, const Profile1D& h, const Profile1D& p, const Grid& grid);

/// Rank-one P in any frame: the diagonal solution in y = Q x, mapped back
/// by u(x) = Q^T u'(Q x). Profiles are functions of y1 = x . q1.
RigiditySolution solve_degenerate(const SymMatrix& P, const Profile1D& h, const Profile1D& p, const Grid& grid);

enum class PathOrder { RowsThenColumns, ColumnsThenRows };

struct EllipticSolution {
  DisplacementField u;
  /// The potential f at the grid nodes.
  std::vector<double> f;
  double residual_pde = 0.0;
  double residual_incl = 0.0;
  double tolerance = 0.0;
};

/// Same-sign P with g sampled at the grid nodes (2D grids only).
///
/// Checks A_P g = P22 g_11 - 2 P12 g_12 + P11 g_22 = 0 at interior nodes and
/// throws NotSolvable when the max-norm exceeds 10 h^2 |g|_inf (|l1| + |l2|).
/// Otherwise integrates grad f = (P12 g_1 - P11 g_2, P22 g_1 - P12 g_2) and
/// grad u = P g + [[0, -1], [1, 0]] f along grid paths from the lower-left
/// node.
EllipticSolution solve_elliptic(const SymMatrix& P, const Grid& grid, const std::vector<double>& g,
                                PathOrder order = PathOrder::RowsThenColumns);

/// Max-norm of A_P g over interior nodes.
double elliptic_operator_residual(const SymMatrix& P, const Grid& grid, const std::vector<double>& g);

/// Integrate a nodal gradient field (gx, gy) from value 0 at the lower-left
/// node with the trapezoid rule along the chosen path.
std::vector<double> path_integrate(const Grid& grid, const std::vector<double>& gx, const std::vector<double>& gy,
                                   PathOrder order = PathOrder::RowsThenColumns);

/// Max-norm of sym_gradient(u) - P g(cell centre).
double inclusion_residual(const DisplacementField& u, const SymMatrix& P,
                          const std::function<double(std::span<const double>)>& g);

}  // namespace bdlab
