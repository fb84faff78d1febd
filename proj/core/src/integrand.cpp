#include "bdlab/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bdlab/error.hpp"

namespace bdlab {

SymMatrix fd_gradient(const IntegrandFn& f, std::span<const double> x, const SymMatrix& A, double eps) {
  const int d = A.dim();
  SymMatrix g(d);
  const double h = eps * (1.0 + A.norm());
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      SymMatrix plus = A, minus = A;
      plus(i, j) += h;
      minus(i, j) -= h;
      // Off-diagonal slots move both (i, j) and (j, i), so G : E = 2 G_ij.
      const double scale = i == j ? 2.0 * h : 4.0 * h;
      g(i, j) = (f(x, plus) - f(x, minus)) / scale;
    }
  }
  return g;
}

SymMatrix Integrand::gradient(std::span<const double> x, const SymMatrix& A, double eps) const {
  if (grad) return (*grad)(x, A);
  return fd_gradient(eval, x, A, eps);
}

namespace {

SymMatrix random_direction(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SymMatrix m(d);
  for (auto& v : m.packed()) v = normal(rng);
  const double n = m.norm();
  return n > 0 ? m / n : SymMatrix::identity(d) / std::sqrt(double(d));
}

void estimate_growth(Integrand& f) {
  constexpr int kSamples = 10000;
  std::mt19937_64 rng(0x5eed1234ULL);
  std::uniform_real_distribution<double> expo(-3.0, 9.0);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double m_small = 0.0, m_large = 0.0, m_all = 0.0;
  bool finite = true;
  Vec x(f.dim, 0.0);
  for (int s = 0; s < kSamples; ++s) {
    const double e = expo(rng);
    const double scale = std::pow(10.0, e);
    const SymMatrix A = random_direction(rng, f.dim) * scale;
    if (f.x_dependent) {
      for (auto& c : x) c = coord(rng);
    }
    const double v = f.eval(x, A);
    if (!std::isfinite(v)) {
      finite = false;
      continue;
    }
    const double ratio = std::abs(v) / (1.0 + A.norm());
    m_all = std::max(m_all, ratio);
    if (e <= 2.0) m_small = std::max(m_small, ratio);
    if (e >= 6.0) m_large = std::max(m_large, ratio);
  }
  f.growth_M = finite ? m_all : std::numeric_limits<double>::infinity();
  f.growth_ok = finite && m_large <= 2.0 * m_small + 1e-12;
}

}  // namespace

Integrand make_integrand(IntegrandFn eval, int dim, std::string description, bool x_dependent,
                         std::optional<IntegrandGradFn> grad) {
  if (dim < 1) throw InputError("integrand dimension must be >= 1");
  Integrand f;
  f.eval = std::move(eval);
  f.grad = std::move(grad);
  f.dim = dim;
  f.x_dependent = x_dependent;
  f.description = std::move(description);
  estimate_growth(f);
  return f;
}

namespace catalog {

namespace {

SymMatrix normalized_or_zero(const SymMatrix& A) {
  const double n = A.norm();
  return n > 0 ? A / n : SymMatrix::zero(A.dim());
}

std::string matrix_text(const SymMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  const auto rows = m.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << (i ? "," : "") << "[";
    for (std::size_t j = 0; j < rows[i].size(); ++j) os << (j ? "," : "") << rows[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace

Integrand norm(int dim) {
  return make_integrand([](std::span<const double>, const SymMatrix& A) { return A.norm(); }, dim, "norm(A)",
                        false, [](std::span<const double>, const SymMatrix& A) { return normalized_or_zero(A); });
}

Integrand area(int dim) {
  return make_integrand(
      [](std::span<const double>, const SymMatrix& A) { return std::sqrt(1.0 + A.norm_squared()); }, dim,
      "sqrt(1 + normsq(A))", false,
      [](std::span<const double>, const SymMatrix& A) { return A / std::sqrt(1.0 + A.norm_squared()); });
}

Integrand linear(const SymMatrix& B0) {
  return make_integrand([B0](std::span<const double>, const SymMatrix& A) { return frobenius_inner(A, B0); },
                        B0.dim(), "dot(A, " + matrix_text(B0) + ")", false,
                        [B0](std::span<const double>, const SymMatrix&) { return B0; });
}

Integrand quadratic(int dim) {
  return make_integrand([](std::span<const double>, const SymMatrix& A) { return A.norm_squared(); }, dim,
                        "normsq(A)", false, [](std::span<const double>, const SymMatrix& A) { return 2.0 * A; });
}

Integrand neg_norm(int dim) {
  return make_integrand([](std::span<const double>, const SymMatrix& A) { return -A.norm(); }, dim, "-norm(A)",
                        false, [](std::span<const double>, const SymMatrix& A) { return -normalized_or_zero(A); });
}

Integrand shifted_norm(const SymMatrix& A0) {
  return make_integrand([A0](std::span<const double>, const SymMatrix& A) { return (A - A0).norm(); }, A0.dim(),
                        "norm(A - " + matrix_text(A0) + ")", false,
                        [A0](std::span<const double>, const SymMatrix& A) { return normalized_or_zero(A - A0); });
}

Integrand kinked_dyad(const SymMatrix& P) {
  const std::string p = matrix_text(P);
  return make_integrand(
      [P](std::span<const double>, const SymMatrix& A) { return 2.0 * A.norm() - (A + P).norm() - (A - P).norm(); },
      P.dim(), "2 * norm(A) - norm(A + " + p + ") - norm(A - " + p + ")", false,
      [P](std::span<const double>, const SymMatrix& A) {
        return 2.0 * normalized_or_zero(A) - normalized_or_zero(A + P) - normalized_or_zero(A - P);
      });
}

}  // namespace catalog

std::string_view to_string(RecessionMode mode) {
  switch (mode) {
    case RecessionMode::Strong: return "strong";
    case RecessionMode::UpperSharp: return "upper_sharp";
    case RecessionMode::LowerFlat: return "lower_flat";
  }
  return "?";
}

RecessionEstimate recession(const Integrand& f, std::span<const double> x, const SymMatrix& A, RecessionMode mode,
                            const RecessionOptions& opts) {
  if (!(opts.t0 > 0) || !(opts.ratio >= 2.0) || opts.max_steps < 4) {
    throw InputError("recession ladder needs t0 > 0, ratio >= 2 and at least 4 steps");
  }
  RecessionEstimate est;
  est.mode = mode;
  const double anorm = A.norm();
  if (anorm == 0.0) {
    est.converged = true;
    est.t_max = opts.t0;
    return est;
  }
  const double bound = std::isfinite(f.growth_M) ? 2.0 * std::max(f.growth_M, 1e-300) * (1.0 + anorm)
                                                 : std::numeric_limits<double>::infinity();
  const double tol = opts.tol * (1.0 + anorm);

  std::vector<double> q;
  double prev_ext = std::numeric_limits<double>::quiet_NaN();
  double ext = 0.0;
  double t = opts.t0;
  for (int k = 0; k < opts.max_steps; ++k, t *= opts.ratio) {
    const double v = f(x, A * t) / t;
    if (!std::isfinite(v) || std::abs(v) > bound) {
      throw RecessionError("recession ladder diverges at t = " + std::to_string(t) + " (|A| = " +
                           std::to_string(anorm) + ")");
    }
    q.push_back(v);
    est.t_max = t;
    if (q.size() < 3) {
      ext = v;
      continue;
    }
    const double d1 = q[k - 1] - q[k - 2];
    const double d2 = q[k] - q[k - 1];
    const double den = d2 - d1;
    ext = std::abs(den) > 1e-14 * (1.0 + std::abs(v)) ? v - d2 * d2 / den : v;
    if (std::isfinite(prev_ext)) {
      est.spread = std::abs(ext - prev_ext);
      // Aitken also maps divergent geometric ladders to finite values.
      const bool contracting = std::abs(d2) <= std::abs(d1);
      if (contracting && est.spread < tol) {
        est.converged = true;
        break;
      }
    }
    prev_ext = ext;
  }
  est.value = ext;
  est.raw_gap = std::abs(q.back() - ext);
  if (mode == RecessionMode::Strong) return est;

  const double tm = std::max(est.t_max, opts.t_probe);
  const double rho = opts.rho0 * (1.0 + anorm) / std::sqrt(tm);
  const double base = f(x, A * tm) / tm;
  std::mt19937_64 rng(0xa11ce5ULL);
  double hi = 0.0, lo = 0.0;
  const auto probe = [&](const SymMatrix& dir) {
    const double dev = f(x, (A + rho * dir) * tm) / tm - base;
    if (std::isfinite(dev)) {
      hi = std::max(hi, dev);
      lo = std::min(lo, dev);
    }
  };
  for (std::size_t s = 0; s < A.packed_size(); ++s) {
    SymMatrix e(A.dim());
    e.packed()[s] = 1.0;
    e /= e.norm();
    probe(e);
    probe(-e);
  }
  for (int s = 0; s < opts.perturbations; ++s) probe(random_direction(rng, A.dim()));
  est.value += mode == RecessionMode::UpperSharp ? hi : lo;
  return est;
}

double recession_value(const Integrand& f, std::span<const double> x, const SymMatrix& A, RecessionMode mode,
                       const RecessionOptions& opts) {
  const RecessionEstimate est = recession(f, x, A, mode, opts);
  if (!est.converged) {
    std::ostringstream os;
    os.precision(9);
    os << "recession of " << f.description << " does not converge in direction [";
    for (std::size_t k = 0; k < A.packed_size(); ++k) os << (k ? "," : "") << A.packed()[k];
    os << "] (packed), spread " << est.spread;
    throw RecessionError(os.str());
  }
  return est.value;
}

double transform_S(const Integrand& f, std::span<const double> x, const SymMatrix& Ahat) {
  const double n = Ahat.norm();
  if (!(n < 1.0)) throw InputError("transform_S needs |Ahat| < 1");
  return (1.0 - n) * f(x, Ahat / (1.0 - n));
}

}  // namespace bdlab
