#include "bdlab/quasiconvexity.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "bdlab/error.hpp"

namespace bdlab {

double sawtooth(double t) {
  const double f = t - std::floor(t);
  return f <= 0.5 ? f : 1.0 - f;
}

namespace {

struct CellSystem {
  const Grid& g;
  int n0, n1;
  double h0, h1;
  std::size_t ncells;

  explicit CellSystem(const Grid& grid)
      : g(grid), n0(grid.nodes(0)), n1(grid.nodes(1)), h0(grid.spacing(0)), h1(grid.spacing(1)),
        ncells(grid.cell_count()) {}

  bool boundary(int i, int j) const { return i == 0 || j == 0 || i == n0 - 1 || j == n1 - 1; }

  // Compact symmetrized gradient of the cell with lower-left node (i, j).
  SymMatrix strain(const std::vector<double>& psi, int i, int j) const {
    const auto at = [&](int a, int b, int c) { return psi[2 * (static_cast<std::size_t>(a) + n0 * b) + c]; };
    SymMatrix e(2);
    double du[2][2];
    for (int c = 0; c < 2; ++c) {
      du[c][0] = 0.5 * ((at(i + 1, j, c) - at(i, j, c)) + (at(i + 1, j + 1, c) - at(i, j + 1, c))) / h0;
      du[c][1] = 0.5 * ((at(i, j + 1, c) - at(i, j, c)) + (at(i + 1, j + 1, c) - at(i + 1, j, c))) / h1;
    }
    e(0, 0) = du[0][0];
    e(1, 1) = du[1][1];
    e(0, 1) = 0.5 * (du[0][1] + du[1][0]);
    return e;
  }

  double objective(const Integrand& h, const SymMatrix& A, const std::vector<double>& psi, std::vector<double>* grad) const {
    static const Vec kOrigin{0.0, 0.0};
    if (grad) grad->assign(psi.size(), 0.0);
    double sum = 0.0;
    const double inv_n = 1.0 / static_cast<double>(ncells);
    for (int j = 0; j + 1 < n1; ++j) {
      for (int i = 0; i + 1 < n0; ++i) {
        const SymMatrix M = A + strain(psi, i, j);
        const double v = h(kOrigin, M);
        if (!std::isfinite(v)) throw SearchAbort("integrand is not finite during the cell search");
        sum += v;
        if (!grad) continue;
        const SymMatrix G = h.gradient(kOrigin, M);
        for (int corner = 0; corner < 4; ++corner) {
          const int bi = corner & 1, bj = corner >> 1;
          const double s0 = bi ? 1.0 : -1.0, s1 = bj ? 1.0 : -1.0;
          const std::size_t node = static_cast<std::size_t>(i + bi) + static_cast<std::size_t>(n0) * (j + bj);
          for (int c = 0; c < 2; ++c) {
            (*grad)[2 * node + c] += (G(c, 0) * s0 / (2.0 * h0) + G(c, 1) * s1 / (2.0 * h1)) * inv_n;
          }
        }
      }
    }
    if (grad) {
      for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i)
          if (boundary(i, j)) {
            const std::size_t node = static_cast<std::size_t>(i) + static_cast<std::size_t>(n0) * j;
            (*grad)[2 * node] = (*grad)[2 * node + 1] = 0.0;
          }
    }
    return sum * inv_n;
  }

  void project(std::vector<double>& psi, double bound) const {
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const std::size_t node = static_cast<std::size_t>(i) + static_cast<std::size_t>(n0) * j;
        for (int c = 0; c < 2; ++c) {
          double& v = psi[2 * node + c];
          v = boundary(i, j) ? 0.0 : std::clamp(v, -bound, bound);
        }
      }
  }
};

struct StartResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> psi;
};

StartResult descend(const CellSystem& sys, const Integrand& h, const SymMatrix& A, std::vector<double> psi,
                    const CellProblemOptions& opts) {
  sys.project(psi, opts.psi_bound);
  std::vector<double> grad, grad_new, trial(psi.size());
  double J = sys.objective(h, A, psi, &grad);
  const double hmin = std::min(sys.h0, sys.h1);
  double gmax = 0.0;
  for (double v : grad) gmax = std::max(gmax, std::abs(v));
  double step = gmax > 0 ? 0.1 * hmin / gmax : 1.0;
  int stall = 0;
  for (int it = 0; it < opts.iters && gmax > 0; ++it) {
    double J_new = J;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t k = 0; k < psi.size(); ++k) trial[k] = psi[k] - step * grad[k];
      sys.project(trial, opts.psi_bound);
      double decrease = 0.0;
      for (std::size_t k = 0; k < psi.size(); ++k) decrease += grad[k] * (psi[k] - trial[k]);
      J_new = sys.objective(h, A, trial, nullptr);
      if (J_new <= J - 1e-4 * decrease && decrease > 0) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    sys.objective(h, A, trial, &grad_new);
    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double s = trial[k] - psi[k];
      const double y = grad_new[k] - grad[k];
      ss += s * s;
      sy += s * y;
    }
    step = sy > 0 ? ss / sy : 2.0 * step;
    const double improvement = J - J_new;
    psi.swap(trial);
    grad.swap(grad_new);
    J = J_new;
    stall = improvement < 1e-12 * (1.0 + std::abs(J)) ? stall + 1 : 0;
    if (stall >= 10) break;
  }
  return {J, std::move(psi)};
}

std::vector<double> laminate_values(const Grid& cell, std::span<const double> a, std::span<const double> b,
                                    double alpha, int k) {
  std::vector<double> psi(2 * cell.node_count());
  for (std::size_t n = 0; n < cell.node_count(); ++n) {
    const Vec x = cell.node_position(n);
    const double s = alpha * sawtooth(k * (x[0] * a[0] + x[1] * a[1]));
    psi[2 * n] = s * b[0];
    psi[2 * n + 1] = s * b[1];
  }
  return psi;
}

}  // namespace

DisplacementField laminate_field(const Grid& cell, std::span<const double> a, std::span<const double> b,
                                 double alpha, int k) {
  if (cell.dim() != 2) throw InputError("laminate_field is 2D only");
  std::vector<double> psi = laminate_values(cell, a, b, alpha, k);
  CellSystem(cell).project(psi, std::numeric_limits<double>::infinity());
  return DisplacementField(cell, std::move(psi));
}

double cell_mean(const Integrand& h, const SymMatrix& A, const DisplacementField& psi) {
  if (psi.dim() != 2) throw InputError("cell_mean is 2D only");
  return CellSystem(psi.grid()).objective(h, A, psi.values(), nullptr);
}

CellProblemResult cell_problem_min(const Integrand& h, const SymMatrix& A, const Grid& cell,
                                   const CellProblemOptions& opts) {
  if (cell.dim() != 2 || A.dim() != 2) throw InputError("cell_problem_min is 2D only");
  if (h.x_dependent) throw InputError("cell_problem_min needs an x-independent integrand");
  if (opts.iters < 0 || opts.restarts < 0 || !(opts.psi_bound > 0)) throw InputError("invalid cell search options");
  const CellSystem sys(cell);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(2 * cell.node_count(), 0.0);
  if (opts.laminate_seeds) {
    const double r = std::numbers::sqrt2 / 2;
    const std::vector<Vec> dirs = {{1, 0}, {0, 1}, {r, r}, {r, -r}};
    for (std::size_t p = 0; p < dirs.size(); ++p)
      for (std::size_t q = p; q < dirs.size(); ++q)
        for (int k : {1, 2}) starts.push_back(laminate_values(cell, dirs[p], dirs[q], opts.psi_bound, k));
  }
  for (const auto& [a, b] : opts.seed_dyads) {
    const double an = euclidean_norm(a), bn = euclidean_norm(b);
    if (!(an > 0) || !(bn > 0)) continue;
    const Vec ua{a[0] / an, a[1] / an}, ub{b[0] / bn, b[1] / bn};
    for (int k : {1, 2}) starts.push_back(laminate_values(cell, ua, ub, opts.psi_bound, k));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> noise(-0.1 * opts.psi_bound, 0.1 * opts.psi_bound);
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<double> psi(2 * cell.node_count());
    for (auto& v : psi) v = noise(rng);
    starts.push_back(std::move(psi));
  }

  std::vector<StartResult> results(starts.size());
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(starts.size())));
  if (nthreads == 1) {
    for (std::size_t s = 0; s < starts.size(); ++s) results[s] = descend(sys, h, A, starts[s], opts);
  } else {
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t s = t; s < starts.size(); s += nthreads) results[s] = descend(sys, h, A, starts[s], opts);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  CellProblemResult out;
  static const Vec kOrigin{0.0, 0.0};
  out.h_at_A = h(kOrigin, A);
  out.starts = static_cast<int>(starts.size());
  out.min_mean = out.h_at_A;
  std::vector<double> best(2 * cell.node_count(), 0.0);
  for (std::size_t s = 0; s < results.size(); ++s) {
    if (results[s].value < out.min_mean) {
      out.min_mean = results[s].value;
      out.best_start = static_cast<int>(s);
      best = results[s].psi;
    }
  }
  out.tolerance = opts.tol_factor * (1.0 + std::abs(out.h_at_A));
  out.violation = out.min_mean < out.h_at_A - out.tolerance;
  out.psi = DisplacementField(cell, std::move(best));
  return out;
}

std::vector<SegmentViolation> dyad_segment_scan(const Integrand& h, std::span<const SymMatrix> As,
                                                std::span<const std::pair<Vec, Vec>> dyads,
                                                std::span<const double> thetas, double tol) {
  std::vector<SegmentViolation> out;
  const Vec x(h.dim, 0.0);
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("dyad_segment_scan: theta must lie in [0, 1]");
  }
  for (const auto& A1 : As) {
    const double h1 = h(x, A1);
    for (const auto& [a, b] : dyads) {
      const SymMatrix A2 = A1 + sym_dyad(a, b);
      const double h2 = h(x, A2);
      for (double theta : thetas) {
        const double lhs = h(x, theta * A1 + (1.0 - theta) * A2);
        const double rhs = theta * h1 + (1.0 - theta) * h2;
        const double gap = lhs - rhs;
        if (gap > tol * (1.0 + std::abs(rhs))) out.push_back({A1, A2, theta, gap});
      }
    }
  }
  return out;
}

}  // namespace bdlab
