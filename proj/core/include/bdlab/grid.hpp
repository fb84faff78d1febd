#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bdlab/symtensor.hpp"

namespace bdlab {

/// Tensor-product node grid over an axis-aligned box.
///
/// Nodes are numbered with axis 0 fastest; cells likewise. Every axis carries
/// at least three nodes.
class Grid {
 public:
  Grid() = default;
  Grid(Vec lo, Vec hi, std::vector<int> nodes);

  /// Box [lo, hi]^dim with `n` nodes per axis.
  static Grid cube(int dim, double lo, double hi, int n);

  int dim() const noexcept { return static_cast<int>(lo_.size()); }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  const Vec& lo() const noexcept { return lo_; }
  const Vec& hi() const noexcept { return hi_; }
  int nodes(int axis) const { return n_[axis]; }
  int cells(int axis) const { return n_[axis] - 1; }
  const std::vector<int>& node_counts() const noexcept { return n_; }
  double spacing(int axis) const { return (hi_[axis] - lo_[axis]) / (n_[axis] - 1); }
  double max_spacing() const;
  double min_spacing() const;

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t cell_count() const noexcept { return cell_count_; }
  double cell_volume() const;
  double box_volume() const;

  std::size_t node_index(std::span<const int> idx) const;
  std::size_t node_index(int i, int j) const { return static_cast<std::size_t>(i + n_[0] * j); }
  std::vector<int> node_multi_index(std::size_t flat) const;
  std::size_t cell_index(std::span<const int> idx) const;
  std::vector<int> cell_multi_index(std::size_t flat) const;

  Vec node_position(std::size_t flat) const;
  Vec cell_center(std::size_t flat) const;
  Vec cell_lower(std::size_t flat) const;
  Vec cell_upper(std::size_t flat) const;
  /// Flat indices of the 2^dim corners of a cell; bit k of the corner number
  /// selects the upper node along axis k.
  std::vector<std::size_t> cell_corners(std::size_t flat_cell) const;

  bool contains(std::span<const double> x, double slack = 0.0) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.n_ == b.n_;
  }

 private:
  Vec lo_, hi_;
  std::vector<int> n_;
  std::size_t node_count_ = 0;
  std::size_t cell_count_ = 0;
};

}  // namespace bdlab
