#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "bdlab/symtensor.hpp"

namespace bdlab {

using IntegrandFn = std::function<double(std::span<const double> x, const SymMatrix& A)>;
using IntegrandGradFn = std::function<SymMatrix(std::span<const double> x, const SymMatrix& A)>;

/// f(x, A) with linear growth |f(x, A)| <= M (1 + |A|).
///
/// `growth_M` is estimated from 10^4 deterministic samples with |A| spread
/// over twelve orders of magnitude; `growth_ok` is false when the ratio
/// |f| / (1 + |A|) keeps increasing at large |A| or turns non-finite. The
/// check is a sample, not a proof.
struct Integrand {
  IntegrandFn eval;
  std::optional<IntegrandGradFn> grad;
  int dim = 2;
  bool x_dependent = false;
  double growth_M = 0.0;
  bool growth_ok = true;
  std::string description;

  double operator()(std::span<const double> x, const SymMatrix& A) const { return eval(x, A); }
  /// A-derivative G with f(x, A + E) ~ f(x, A) + G : E. Falls back to
  /// central differences when no analytic gradient is attached.
  SymMatrix gradient(std::span<const double> x, const SymMatrix& A, double eps = 1e-7) const;
};

/// Wrap an evaluator and run the growth sample.
Integrand make_integrand(IntegrandFn eval, int dim, std::string description, bool x_dependent = false,
                         std::optional<IntegrandGradFn> grad = std::nullopt);

/// Central-difference A-derivative of any evaluator.
SymMatrix fd_gradient(const IntegrandFn& f, std::span<const double> x, const SymMatrix& A, double eps = 1e-7);

namespace catalog {
/// |A|
Integrand norm(int dim = 2);
/// sqrt(1 + |A|^2)
Integrand area(int dim = 2);
/// A : B0
Integrand linear(const SymMatrix& B0);
/// A : A (superlinear; fails the growth check by design)
Integrand quadratic(int dim = 2);
/// -|A|
Integrand neg_norm(int dim = 2);
/// |A - A0|
Integrand shifted_norm(const SymMatrix& A0);
/// 2|A| - |A + P| - |A - P|: bounded, with concave kinks at A = +-P along
/// the direction P.
Integrand kinked_dyad(const SymMatrix& P);
}  // namespace catalog

enum class RecessionMode { Strong, UpperSharp, LowerFlat };

std::string_view to_string(RecessionMode mode);

struct RecessionOptions {
  double t0 = 1.0;
  double ratio = 4.0;
  int max_steps = 24;
  /// Successive extrapolants must agree to tol * (1 + |A|).
  double tol = 1e-6;
  /// Radius of the perturbation ball at t is rho0 (1 + |A|) / sqrt(t).
  double rho0 = 1e-2;
  int perturbations = 24;
  /// Sharp and flat deviations are probed at max(t_max, t_probe).
  double t_probe = 1e8;
};

struct RecessionEstimate {
  double value = 0.0;
  RecessionMode mode = RecessionMode::Strong;
  double t_max = 0.0;
  bool converged = false;
  /// Difference between the last two extrapolants.
  double spread = 0.0;
  /// |f(t_max A) / t_max - value|, the un-extrapolated distance.
  double raw_gap = 0.0;
};

/// Estimate f^inf(x, A) (Strong), f^#(x, A) (UpperSharp) or f_#(x, A)
/// (LowerFlat).
///
/// The strong limit of f(x, tA)/t is extrapolated with Aitken's delta-squared
/// process over the geometric ladder t_k = t0 ratio^k. The sharp and flat
/// variants add the largest (smallest) deviation of f(x, tA')/t from
/// f(x, tA)/t over a deterministic sample of A' in a shrinking ball at a
/// large t. Throws RecessionError when the ladder exceeds
/// 2 M (1 + |A|).
RecessionEstimate recession(const Integrand& f, std::span<const double> x, const SymMatrix& A,
                            RecessionMode mode = RecessionMode::Strong, const RecessionOptions& opts = {});

/// Strong recession value, throwing RecessionError naming the direction
/// when the ladder does not converge.
double recession_value(const Integrand& f, std::span<const double> x, const SymMatrix& A,
                       RecessionMode mode = RecessionMode::Strong, const RecessionOptions& opts = {});

/// (1 - |Ahat|) f(x, Ahat / (1 - |Ahat|)) for |Ahat| < 1.
double transform_S(const Integrand& f, std::span<const double> x, const SymMatrix& Ahat);

}  // namespace bdlab
