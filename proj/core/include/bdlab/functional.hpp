#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdlab/fields.hpp"
#include "bdlab/integrand.hpp"
#include "bdlab/measure.hpp"

namespace bdlab {

struct FunctionalOptions {
  bool include_boundary = true;
  /// Boundary data g: the boundary term uses the trace u - g.
  std::optional<VectorFunction> dirichlet;
  RecessionMode recession_mode = RecessionMode::Strong;
  RecessionOptions recession;
};

/// F(u) = int f(x, Eu) dx + int f^inf(x, dE^s u / d|E^s u|) d|E^s u|
///        + int_{boundary} f^inf(x, u (.) n) dH^{d-1}
/// with n the inner unit normal of the box.
struct FunctionalBreakdown {
  double bulk = 0.0;
  double singular = 0.0;
  double boundary = 0.0;
  double total = 0.0;
  bool boundary_included = false;
  RecessionMode recession_mode = RecessionMode::Strong;
};

/// Bulk by the cell midpoint rule on the jump-corrected symmetrized
/// gradient, singular part exactly per surface piece (f^inf taken at the
/// piece centroid), boundary by the trapezoid rule on box faces using the
/// nodal (inner) trace.
FunctionalBreakdown evaluate_functional(const Integrand& f, const DisplacementField& u,
                                        const FunctionalOptions& opts = {});

/// Same arithmetic applied to an assembled measure (no boundary term).
FunctionalBreakdown evaluate_on_measure(const Integrand& f, const SymMeasure& mu, const FunctionalOptions& opts = {});

/// <mu> = int sqrt(1 + |density|^2) dx + |mu^s|(box).
double area_functional(const SymMeasure& mu);

/// Tensor-product cubic B-spline of support radius delta, normalized to
/// unit mass.
double bspline_kernel(double t, double delta);

/// Discrete convolution with the cubic B-spline kernel of radius delta,
/// clamping values beyond the box. Nodes on an interface use the mean of
/// both sides. The result carries no jumps.
DisplacementField mollify(const DisplacementField& u, double delta);

struct StrictContinuityRow {
  double delta = 0.0;
  double area = 0.0;
  double value = 0.0;
  double area_gap = 0.0;
  double value_gap = 0.0;
};

struct StrictContinuityReport {
  double area_limit = 0.0;
  double value_limit = 0.0;
  std::vector<StrictContinuityRow> rows;
  bool monotone = false;
};

/// Mollify u at each radius (decreasing, each >= 2h) and compare area and
/// F(u_delta) with their values at u. The boundary term follows `opts`.
StrictContinuityReport strict_continuity_experiment(const Integrand& f, const DisplacementField& u,
                                                    const std::vector<double>& deltas,
                                                    const FunctionalOptions& opts = {});

enum class SequenceKind { Laminate, Concentration, Mollification };
enum class Profile { Sawtooth, Sine };

std::string_view to_string(SequenceKind kind);

/// Generating sequence built on a base field.
///
///  Laminate:      u_j = base + (amplitude / j) S(j x . a) b
///  Concentration: u_j = base + amplitude phi(j (x . a - offset)) b,
///                 phi a C^1 step from 0 to 1; the limit carries the jump
///                 amplitude b across {x . a = offset}
///  Mollification: u_j = base mollified at radius amplitude / j
struct SequenceSpec {
  SequenceKind kind = SequenceKind::Laminate;
  Vec a, b;
  double amplitude = 1.0;
  Profile profile = Profile::Sawtooth;
  double offset = 0.0;
  std::vector<int> js;
  DisplacementField base;
};

/// u_j for one index; throws ResolutionError when the oscillation or
/// transition length falls below 4h.
DisplacementField realize(const SequenceSpec& seq, int j);
/// The weak* limit of the sequence.
DisplacementField sequence_limit(const SequenceSpec& seq);

struct LscReport {
  std::vector<int> js;
  std::vector<double> values;
  std::vector<double> areas;
  double liminf_estimate = 0.0;
  double limit_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  RecessionMode recession_mode = RecessionMode::Strong;
};

/// PASS iff the minimum of F(u_j) over the last half of the j list is at
/// least F(limit) - 1e-6 (1 + |F(limit)|).
LscReport lsc_experiment(const Integrand& f, const SequenceSpec& seq, const FunctionalOptions& opts);

struct MinimizeOptions {
  FunctionalOptions functional;
  /// Coercivity m (|A| - c) <= f(x, A), sample-checked.
  double coercivity_m = 1.0;
  double coercivity_c = 1.0;
  int iters = 400;
  int random_starts = 1;
  std::uint64_t seed = 1;
  std::vector<DisplacementField> competitors;
};

struct MinimizeResult {
  DisplacementField u;
  FunctionalBreakdown breakdown;
  int best_start = 0;
  bool stagnated = false;
};

/// Descent over node values (jump-free fields) from the zero field, the
/// best affine field c + B x, random perturbations and every competitor.
/// The returned total is an upper bound for the discrete minimum and never
/// exceeds a competitor's total.
MinimizeResult minimize_functional(const Integrand& f, const Grid& grid, const MinimizeOptions& opts = {});

}  // namespace bdlab
