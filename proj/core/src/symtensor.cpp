#include "bdlab/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "bdlab/error.hpp"

namespace bdlab {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("dot: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double euclidean_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SymMatrix::SymMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw InputError("SymMatrix: dimension must be >= 1");
  packed_.assign(static_cast<std::size_t>(dim * (dim + 1) / 2), 0.0);
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(int(i), int(i)) = diag[i];
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vec>& rows, double tol) {
  const auto d = rows.size();
  if (d == 0) throw InputError("matrix has no rows");
  double scale = 0.0;
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("matrix is not square");
    for (double v : r) {
      if (!std::isfinite(v)) throw InputError("matrix entry is not finite");
      scale = std::max(scale, std::abs(v));
    }
  }
  SymMatrix m(static_cast<int>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > tol * (1.0 + scale)) {
        throw InputError("matrix is not symmetric: entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") differs from its transpose");
      }
      m(int(i), int(j)) = 0.5 * (rows[i][j] + rows[j][i]);
    }
  }
  return m;
}

double SymMatrix::norm_squared() const noexcept {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    s += (*this)(i, i) * (*this)(i, i);
    for (int j = i + 1; j < dim_; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
  }
  return s;
}

double SymMatrix::norm() const noexcept { return std::sqrt(norm_squared()); }

double SymMatrix::trace() const noexcept {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

std::vector<Vec> SymMatrix::rows() const {
  std::vector<Vec> out(dim_, Vec(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

Vec SymMatrix::apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dim_) throw InputError("apply: dimension mismatch");
  Vec out(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

double SymMatrix::quadratic_form(std::span<const double> v) const { return dot(v, apply(v)); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw InputError("SymMatrix +: dimension mismatch");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += other.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw InputError("SymMatrix -: dimension mismatch");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= other.packed_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
  for (auto& v : packed_) v *= s;
  return *this;
}

SymMatrix& SymMatrix::operator/=(double s) noexcept {
  for (auto& v : packed_) v /= s;
  return *this;
}

bool operator==(const SymMatrix& a, const SymMatrix& b) noexcept {
  return a.dim_ == b.dim_ && std::equal(a.packed_.begin(), a.packed_.end(), b.packed_.begin());
}

SymMatrix sym_dyad(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("sym_dyad: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw InputError("sym_dyad: empty vectors");
  const int d = static_cast<int>(a.size());
  SymMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m(i, j) = 0.5 * (a[i] * b[j] + b[i] * a[j]);
  return m;
}

double frobenius_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("frobenius_inner: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    s += a(i, i) * b(i, i);
    for (int j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * b(i, j);
  }
  return s;
}

namespace {

void canonical_sign(Vec& v) {
  for (double c : v) {
    if (std::abs(c) > 1e-12) {
      if (c < 0) {
        for (auto& x : v) x = -x;
      }
      return;
    }
  }
}

SymEigen eigen2(const SymMatrix& m) {
  const double p = m(0, 0), q = m(0, 1), r = m(1, 1);
  const double mean = 0.5 * (p + r);
  const double rad = std::hypot(0.5 * (p - r), q);
  // theta in (-pi/2, pi/2] keeps cos(theta) >= 0.
  const double theta = 0.5 * std::atan2(2.0 * q, p - r);
  const double c = std::cos(theta), s = std::sin(theta);
  SymEigen e;
  e.values = {mean + rad, mean - rad};
  e.vectors = {{c, s}, {-s, c}};
  canonical_sign(e.vectors[1]);
  return e;
}

}  // namespace

SymEigen eigen_decompose(const SymMatrix& m) {
  const int d = m.dim();
  if (d == 1) return SymEigen{{m(0, 0)}, {{1.0}}};
  if (d == 2) return eigen2(m);
  Eigen::MatrixXd dense(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) dense(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  SymEigen e;
  // Eigen returns ascending order.
  for (int k = d - 1; k >= 0; --k) {
    e.values.push_back(solver.eigenvalues()(k));
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = solver.eigenvectors()(i, k);
    canonical_sign(v);
    e.vectors.push_back(std::move(v));
  }
  return e;
}

std::string_view to_string(DyadTag tag) {
  switch (tag) {
    case DyadTag::Zero: return "Zero";
    case DyadTag::RankOneDyad: return "RankOneDyad";
    case DyadTag::OppositeSignDyad: return "OppositeSignDyad";
    case DyadTag::NotDyad: return "NotDyad";
  }
  return "?";
}

std::optional<DyadTag> dyad_tag_from_string(std::string_view name) {
  for (auto t : {DyadTag::Zero, DyadTag::RankOneDyad, DyadTag::OppositeSignDyad, DyadTag::NotDyad}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

DyadClass classify_dyad(const SymMatrix& m, double tol) {
  if (!(tol > 0)) throw InputError("classify_dyad: tol must be positive");
  const double mnorm = m.norm();
  if (!std::isfinite(mnorm)) throw InputError("classify_dyad: matrix is not finite");
  DyadClass out;
  if (mnorm < tol) return out;

  const SymEigen eig = eigen_decompose(m);
  std::vector<int> nonzero;
  for (int k = 0; k < m.dim(); ++k) {
    if (std::abs(eig.values[k]) >= tol * mnorm) nonzero.push_back(k);
  }
  if (nonzero.empty()) return out;

  if (nonzero.size() == 1) {
    const double lambda = eig.values[nonzero[0]];
    const int sign = lambda > 0 ? 1 : -1;
    Vec a = eig.vectors[nonzero[0]];
    for (auto& c : a) c *= std::sqrt(std::abs(lambda));
    Vec b = a;
    for (auto& c : b) c *= sign;
    out.tag = DyadTag::RankOneDyad;
    out.a = std::move(a);
    out.b = std::move(b);
    out.sign = sign;
    return out;
  }

  if (nonzero.size() > 2) {
    out.tag = DyadTag::NotDyad;
    return out;
  }

  // Descending order: the first non-zero eigenvalue is the larger one.
  const double l1 = eig.values[nonzero[0]];
  const double l2 = eig.values[nonzero[1]];
  if (!(l1 > 0 && l2 < 0)) {
    out.tag = DyadTag::NotDyad;
    return out;
  }
  const Vec& v1 = eig.vectors[nonzero[0]];
  const Vec& v2 = eig.vectors[nonzero[1]];
  const double gamma = std::sqrt(-l1 / l2);
  const double scale = std::sqrt(gamma * gamma + 1.0);
  Vec a(m.dim()), b(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    a[i] = (gamma * v1[i] + v2[i]) / scale;
    b[i] = (l1 / gamma * v1[i] + l2 * v2[i]) * scale;
  }
  out.tag = DyadTag::OppositeSignDyad;
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

}  // namespace bdlab
