#include "bdlab/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "bdlab/error.hpp"

namespace bdlab {

JumpInterface JumpInterface::polyline(std::vector<Vec> vertices, Vec jump) {
  if (vertices.size() < 2) throw InputError("jump polyline needs at least two vertices");
  for (const auto& v : vertices) {
    if (v.size() != 2) throw InputError("jump polyline vertices must be 2D");
  }
  if (jump.size() != 2) throw InputError("jump vector must be 2D for a polyline");
  JumpInterface out;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    out.pieces.push_back(make_piece({vertices[i], vertices[i + 1]}));
  }
  out.vertices = std::move(vertices);
  out.jump = std::move(jump);
  return out;
}

JumpInterface JumpInterface::polygon(std::vector<Vec> vertices, Vec jump) {
  if (jump.size() != 3) throw InputError("jump vector must be 3D for a polygon");
  JumpInterface out;
  out.pieces.push_back(make_piece(vertices));
  out.vertices = std::move(vertices);
  out.jump = std::move(jump);
  return out;
}

double JumpInterface::measure() const {
  double s = 0.0;
  for (const auto& p : pieces) s += piece_measure(p);
  return s;
}

double JumpInterface::signed_distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    const double sd = bdlab::signed_distance(p, x);
    if (std::abs(sd) < std::abs(best)) best = sd;
  }
  return best;
}

DisplacementField::DisplacementField(Grid grid, std::vector<double> values, std::vector<JumpInterface> jumps)
    : grid_(std::move(grid)), values_(std::move(values)), jumps_(std::move(jumps)) {
  const std::size_t expected = grid_.node_count() * static_cast<std::size_t>(grid_.dim());
  if (values_.size() != expected) {
    throw InputError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                     std::to_string(expected));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("field values must be finite");
  }
  const double slack = 1e-9 * grid_.max_spacing();
  for (const auto& j : jumps_) {
    if (j.dim() != grid_.dim()) throw InputError("jump interface dimension differs from grid");
    for (const auto& v : j.vertices) {
      if (!grid_.contains(v, slack)) throw InputError("jump interface vertex lies outside the grid box");
    }
  }
}

DisplacementField DisplacementField::zero(Grid grid) {
  const std::size_t n = grid.node_count() * static_cast<std::size_t>(grid.dim());
  return DisplacementField(std::move(grid), std::vector<double>(n, 0.0));
}

namespace {

double side_eps(const Grid& g) { return 1e-9 * g.min_spacing(); }

}  // namespace

bool DisplacementField::on_plus_side(std::size_t node, std::size_t k) const {
  const Vec x = grid_.node_position(node);
  return jumps_[k].signed_distance(x) > side_eps(grid_);
}

DisplacementField sample_field(const Grid& grid, const VectorFunction& fn, std::vector<JumpInterface> jumps) {
  const int d = grid.dim();
  std::vector<double> values(grid.node_count() * static_cast<std::size_t>(d));
  const double eps = side_eps(grid);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    Vec x = grid.node_position(n);
    for (const auto& j : jumps) {
      for (const auto& p : j.pieces) {
        if (std::abs(signed_distance(p, x)) <= eps) {
          for (int k = 0; k < d; ++k) x[k] -= 1e3 * eps * p.normal[k];
        }
      }
    }
    const Vec v = fn(x);
    if (static_cast<int>(v.size()) != d) throw InputError("sampled function returned wrong dimension");
    std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(n * d));
  }
  return DisplacementField(grid, std::move(values), std::move(jumps));
}

std::size_t CellGradient::cut_count() const {
  return static_cast<std::size_t>(std::count(cut.begin(), cut.end(), std::uint8_t{1}));
}

namespace {

constexpr int kMaxDim = 3;
using CornerValues = std::array<std::array<double, kMaxDim>, std::size_t{1} << kMaxDim>;

struct PieceBox {
  std::size_t jump;
  const SurfacePiece* piece;
  Vec lo, hi;
};

// Walks the cells of a grid without allocating per cell.
class CellWalker {
 public:
  explicit CellWalker(const Grid& g) : g_(g), d_(g.dim()), idx_(d_, 0), offsets_(std::size_t{1} << d_) {
    std::vector<std::size_t> stride(d_);
    std::size_t s = 1;
    for (int k = 0; k < d_; ++k) {
      stride[k] = s;
      s *= static_cast<std::size_t>(g.nodes(k));
    }
    for (std::size_t c = 0; c < offsets_.size(); ++c) {
      for (int k = 0; k < d_; ++k)
        if ((c >> k) & 1U) offsets_[c] += stride[k];
    }
  }

  std::size_t lower_node() const { return lower_; }
  std::size_t corner(std::size_t c) const { return lower_ + offsets_[c]; }
  std::size_t corner_count() const { return offsets_.size(); }
  int index(int k) const { return idx_[k]; }

  void advance() {
    for (int k = 0; k < d_; ++k) {
      if (++idx_[k] < g_.cells(k)) break;
      idx_[k] = 0;
    }
    lower_ = 0;
    std::size_t s = 1;
    for (int k = 0; k < d_; ++k) {
      lower_ += static_cast<std::size_t>(idx_[k]) * s;
      s *= static_cast<std::size_t>(g_.nodes(k));
    }
  }

 private:
  const Grid& g_;
  int d_;
  std::vector<int> idx_;
  std::vector<std::size_t> offsets_;
  std::size_t lower_ = 0;
};

std::vector<PieceBox> piece_boxes(const DisplacementField& u) {
  std::vector<PieceBox> out;
  for (std::size_t k = 0; k < u.jumps().size(); ++k) {
    for (const auto& p : u.jumps()[k].pieces) {
      Vec lo = p.vertices.front(), hi = p.vertices.front();
      for (const auto& v : p.vertices)
        for (std::size_t i = 0; i < v.size(); ++i) {
          lo[i] = std::min(lo[i], v[i]);
          hi[i] = std::max(hi[i], v[i]);
        }
      out.push_back({k, &p, std::move(lo), std::move(hi)});
    }
  }
  return out;
}

// Corner values of the walker's cell with the jump removed on the plus side
// of every interface touching the cell. Returns true when some interface
// touches it.
bool corrected_corners(const DisplacementField& u, const CellWalker& cell, const std::vector<PieceBox>& boxes,
                       CornerValues& vals) {
  const Grid& g = u.grid();
  const int d = g.dim();
  for (std::size_t c = 0; c < cell.corner_count(); ++c) {
    const auto v = u.at(cell.corner(c));
    for (int i = 0; i < d; ++i) vals[c][i] = v[i];
  }
  if (boxes.empty()) return false;
  const double slack = 1e-9 * g.min_spacing();
  Vec lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = g.lo(k) + cell.index(k) * g.spacing(k);
    hi[k] = cell.index(k) + 1 == g.cells(k) ? g.hi(k) : g.lo(k) + (cell.index(k) + 1) * g.spacing(k);
  }
  std::vector<char> hit(u.jumps().size(), 0);
  bool touched = false;
  for (const auto& b : boxes) {
    if (hit[b.jump]) continue;
    bool overlap = true;
    for (int k = 0; k < d && overlap; ++k) overlap = b.lo[k] <= hi[k] + slack && b.hi[k] >= lo[k] - slack;
    if (!overlap || !piece_intersects_box(*b.piece, lo, hi, slack)) continue;
    hit[b.jump] = 1;
    touched = true;
    const auto& jump = u.jumps()[b.jump];
    for (std::size_t c = 0; c < cell.corner_count(); ++c) {
      if (u.on_plus_side(cell.corner(c), b.jump)) {
        for (int i = 0; i < d; ++i) vals[c][i] -= jump.jump[i];
      }
    }
  }
  return touched;
}

// Compact cell-centre gradient: grad[i][k] = d u_i / d x_k.
void compact_gradient(const Grid& g, const CornerValues& vals, double (&grad)[kMaxDim][kMaxDim]) {
  const int d = g.dim();
  const double w = 1.0 / static_cast<double>(std::size_t{1} << (d - 1));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) grad[i][k] = 0.0;
  for (std::size_t c = 0; c < (std::size_t{1} << d); ++c) {
    for (int k = 0; k < d; ++k) {
      if (!((c >> k) & 1U)) continue;
      const std::size_t lower = c ^ (std::size_t{1} << k);
      const double inv = w / g.spacing(k);
      for (int i = 0; i < d; ++i) grad[i][k] += (vals[c][i] - vals[lower][i]) * inv;
    }
  }
}

void check_dim(const Grid& g) {
  if (g.dim() < 1 || g.dim() > kMaxDim) throw InputError("fields support dimensions 1 to 3");
}

}  // namespace

CellGradient sym_gradient(const DisplacementField& u) {
  const Grid& g = u.grid();
  check_dim(g);
  const int d = g.dim();
  CellGradient out;
  out.sym.resize(g.cell_count());
  out.cut.assign(g.cell_count(), 0);
  const auto boxes = piece_boxes(u);
  CornerValues vals{};
  double grad[kMaxDim][kMaxDim];
  CellWalker cell(g);
  for (std::size_t c = 0; c < g.cell_count(); ++c, cell.advance()) {
    out.cut[c] = corrected_corners(u, cell, boxes, vals) ? 1 : 0;
    compact_gradient(g, vals, grad);
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) m(i, j) = 0.5 * (grad[i][j] + grad[j][i]);
    out.sym[c] = std::move(m);
  }
  return out;
}

std::vector<std::vector<Vec>> cell_full_gradient(const DisplacementField& u) {
  const Grid& g = u.grid();
  check_dim(g);
  const int d = g.dim();
  std::vector<std::vector<Vec>> out(g.cell_count(), std::vector<Vec>(d, Vec(d)));
  const auto boxes = piece_boxes(u);
  CornerValues vals{};
  double grad[kMaxDim][kMaxDim];
  CellWalker cell(g);
  for (std::size_t c = 0; c < g.cell_count(); ++c, cell.advance()) {
    corrected_corners(u, cell, boxes, vals);
    compact_gradient(g, vals, grad);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) out[c][i][k] = grad[i][k];
  }
  return out;
}

double w_identity_residual(const DisplacementField& u) {
  const Grid& g = u.grid();
  const int d = g.dim();
  if (d < 2) throw InputError("w_identity_residual needs d >= 2");
  const auto grad = cell_full_gradient(u);
  const auto E = [&](std::size_t c, int i, int j) { return 0.5 * (grad[c][i][j] + grad[c][j][i]); };
  const auto W = [&](std::size_t c, int i, int j) { return 0.5 * (grad[c][i][j] - grad[c][j][i]); };

  // Interior nodes are the centres of the dual stencil over 2^d cells.
  double worst = 0.0;
  const double w = 1.0 / static_cast<double>(std::size_t{1} << (d - 1));
  std::vector<int> idx(d), cell(d);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    idx = g.node_multi_index(n);
    bool interior = true;
    for (int k = 0; k < d; ++k) interior = interior && idx[k] > 0 && idx[k] < g.nodes(k) - 1;
    if (!interior) continue;
    std::vector<std::size_t> cells(std::size_t{1} << d);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (int k = 0; k < d; ++k) cell[k] = idx[k] - 1 + static_cast<int>((c >> k) & 1U);
      cells[c] = g.cell_index(cell);
    }
    const auto D = [&](int k, auto&& field) {
      double s = 0.0;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!((c >> k) & 1U)) continue;
        s += field(cells[c]) - field(cells[c ^ (std::size_t{1} << k)]);
      }
      return s * w / g.spacing(k);
    };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const double lhs = D(k, [&](std::size_t c) { return W(c, i, j); });
          const double rhs =
              D(j, [&](std::size_t c) { return E(c, i, k); }) - D(i, [&](std::size_t c) { return E(c, j, k); });
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return worst;
}

RigidFit fit_rigid(const DisplacementField& u) {
  const Grid& g = u.grid();
  const int d = g.dim();
  const int nskew = d * (d - 1) / 2;
  const int p = d + nskew;
  const auto N = static_cast<Eigen::Index>(g.node_count());

  Vec mean(d, 0.0);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    for (int k = 0; k < d; ++k) mean[k] += x[k];
  }
  for (auto& m : mean) m /= static_cast<double>(N);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N * d, p);
  Eigen::VectorXd rhs(N * d);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    Vec x = g.node_position(n);
    for (int k = 0; k < d; ++k) x[k] -= mean[k];
    const auto v = u.at(n);
    for (int i = 0; i < d; ++i) {
      const auto row = static_cast<Eigen::Index>(n) * d + i;
      A(row, i) = 1.0;
      rhs(row) = v[i];
    }
    int col = d;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j, ++col) {
        // R_ij = r, R_ji = -r
        A(static_cast<Eigen::Index>(n) * d + i, col) += x[j];
        A(static_cast<Eigen::Index>(n) * d + j, col) -= x[i];
      }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < p) throw InputError("fit_rigid: degenerate node configuration");
  const Eigen::VectorXd sol = qr.solve(rhs);

  RigidFit fit;
  fit.R.assign(d, Vec(d, 0.0));
  int col = d;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++col) {
      fit.R[i][j] = sol(col);
      fit.R[j][i] = -sol(col);
    }
  fit.u0.resize(d);
  for (int i = 0; i < d; ++i) {
    double s = sol(i);
    for (int j = 0; j < d; ++j) s -= fit.R[i][j] * mean[j];
    fit.u0[i] = s;
  }
  const Eigen::VectorXd misfit = A * sol - rhs;
  fit.residual = std::sqrt(misfit.squaredNorm() / static_cast<double>(N));
  return fit;
}

DisplacementField subtract_rigid(const DisplacementField& u, const RigidFit& fit) {
  DisplacementField out = u;
  const int d = u.dim();
  for (std::size_t n = 0; n < u.grid().node_count(); ++n) {
    const Vec x = u.grid().node_position(n);
    auto v = out.at(n);
    for (int i = 0; i < d; ++i) {
      double r = fit.u0[i];
      for (int j = 0; j < d; ++j) r += fit.R[i][j] * x[j];
      v[i] -= r;
    }
  }
  return out;
}

}  // namespace bdlab
