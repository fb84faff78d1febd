#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bdlab/fields.hpp"
#include "bdlab/grid.hpp"
#include "bdlab/integrand.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

struct CellProblemOptions {
  int iters = 300;
  /// Random starts in addition to psi = 0 and the laminate seeds.
  int restarts = 2;
  std::uint64_t seed = 1;
  bool laminate_seeds = true;
  /// Extra laminate directions (a, b) seeded as alpha s(k x . a) b.
  std::vector<std::pair<Vec, Vec>> seed_dyads;
  /// Box constraint |psi_i| <= psi_bound at every node.
  double psi_bound = 1.0;
  /// Violation threshold factor: min_mean < h(A) - tol_factor (1 + |h(A)|).
  double tol_factor = 1e-5;
  /// Upper bound on concurrently running starts; results are reduced in
  /// start order, so the outcome does not depend on it.
  int threads = 1;
};

struct CellProblemResult {
  double h_at_A = 0.0;
  double min_mean = 0.0;
  double tolerance = 0.0;
  bool violation = false;
  /// 0 = zero start, then laminate seeds, then random starts.
  int best_start = 0;
  int starts = 0;
  DisplacementField psi;
};

/// Search for psi vanishing on the boundary of the unit cell with
/// mean h(A + E psi) < h(A).
///
/// Projected gradient descent with Barzilai-Borwein steps and Armijo
/// backtracking from several starts. psi = 0 is always evaluated, so
/// min_mean <= h(A). A reported violation certifies that h is not
/// symmetric-quasiconvex at A; no violation is evidence only.
CellProblemResult cell_problem_min(const Integrand& h, const SymMatrix& A, const Grid& cell,
                                   const CellProblemOptions& opts = {});

/// Mean of h(A + E psi) over the cells of psi's grid.
double cell_mean(const Integrand& h, const SymMatrix& A, const DisplacementField& psi);

/// Triangle wave with slope +-1, zeros at the integers and peak 1/2.
double sawtooth(double t);

/// psi(x) = alpha s(k x . a) b on `cell`, pinned to 0 on the boundary.
DisplacementField laminate_field(const Grid& cell, std::span<const double> a, std::span<const double> b,
                                 double alpha, int k);

struct SegmentViolation {
  SymMatrix A1, A2;
  double theta = 0.0;
  /// h(theta A1 + (1 - theta) A2) - (theta h(A1) + (1 - theta) h(A2)).
  double gap = 0.0;
};

/// Check convexity of h along A1 -> A1 + a (.) b for every sample.
std::vector<SegmentViolation> dyad_segment_scan(const Integrand& h, std::span<const SymMatrix> As,
                                                std::span<const std::pair<Vec, Vec>> dyads,
                                                std::span<const double> thetas, double tol = 1e-12);

}  // namespace bdlab
