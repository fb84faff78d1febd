#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace bdlab {

/// Plain Euclidean vector; used for points, displacements and dyad witnesses.
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

/// Symmetric d x d matrix stored as its packed upper triangle.
///
/// Symmetry is structural: only entries with i <= j are stored and
/// `operator()(i, j)` reads the same slot as `operator()(j, i)`. Storage is
/// inline for d <= 4, so the type is cheap to copy in per-cell loops.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);

  static SymMatrix zero(int dim) { return SymMatrix(dim); }
  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Build from dense rows. Throws InputError when the rows are not square or
  /// when |M_ij - M_ji| exceeds `tol * (1 + max|M|)`; the stored value is the
  /// average of the two entries.
  static SymMatrix from_rows(const std::vector<Vec>& rows, double tol = 1e-12);

  int dim() const noexcept { return dim_; }
  std::size_t packed_size() const noexcept { return packed_.size(); }
  std::span<const double> packed() const noexcept { return {packed_.data(), packed_.size()}; }
  std::span<double> packed() noexcept { return {packed_.data(), packed_.size()}; }

  double operator()(int i, int j) const noexcept { return packed_[index(i, j)]; }
  double& operator()(int i, int j) noexcept { return packed_[index(i, j)]; }

  /// Frobenius norm sqrt(sum_ij M_ij^2).
  double norm() const noexcept;
  double norm_squared() const noexcept;
  double trace() const noexcept;
  std::vector<Vec> rows() const;
  Vec apply(std::span<const double> v) const;
  /// v^T M v
  double quadratic_form(std::span<const double> v) const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s) noexcept;
  SymMatrix& operator/=(double s) noexcept;

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator/(SymMatrix a, double s) { return a /= s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) noexcept;

  std::size_t index(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i * dim_ - i * (i - 1) / 2 + (j - i));
  }

 private:
  int dim_ = 0;
  boost::container::small_vector<double, 10> packed_;
};

/// a (.) b := (a b^T + b a^T) / 2. Throws InputError on dimension mismatch.
SymMatrix sym_dyad(std::span<const double> a, std::span<const double> b);

/// A : B = sum_ij A_ij B_ij. Throws InputError on dimension mismatch.
double frobenius_inner(const SymMatrix& a, const SymMatrix& b);

/// Eigen-decomposition with eigenvalues in descending order and orthonormal
/// eigenvectors. Each eigenvector's first non-negligible component is
/// non-negative. d = 2 uses the closed form; larger d uses a self-adjoint
/// Jacobi-type solver.
struct SymEigen {
  Vec values;
  std::vector<Vec> vectors;
};
SymEigen eigen_decompose(const SymMatrix& m);

enum class DyadTag { Zero, RankOneDyad, OppositeSignDyad, NotDyad };

std::string_view to_string(DyadTag tag);
std::optional<DyadTag> dyad_tag_from_string(std::string_view name);

/// Result of classify_dyad.
///
/// OppositeSignDyad: M = sym_dyad(a, b) with |a| = 1.
/// RankOneDyad: M = sign * a (x) a, and also M = sym_dyad(a, b) with b = sign * a.
struct DyadClass {
  DyadTag tag = DyadTag::Zero;
  std::optional<Vec> a;
  std::optional<Vec> b;
  std::optional<int> sign;
};

inline constexpr double kDefaultDyadTol = 1e-9;

/// Decide whether M is a symmetric tensor product and construct witnesses.
///
/// |M| < tol gives Zero. An eigenvalue is treated as zero when
/// |lambda| < tol * |M|. With exactly two non-zero eigenvalues of opposite
/// sign the witnesses are built in the eigenframe as
///   a = (gamma, 1), b = (lambda_1 / gamma, lambda_2), gamma = sqrt(-lambda_1 / lambda_2)
/// and rotated back; in d > 2 the same construction runs in the plane
/// spanned by the two eigenvectors, and rank > 2 is NotDyad.
DyadClass classify_dyad(const SymMatrix& m, double tol = kDefaultDyadTol);

}  // namespace bdlab
