#include "bdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdlab/error.hpp"

namespace bdlab {

Grid::Grid(Vec lo, Vec hi, std::vector<int> nodes)
    : lo_(std::move(lo)), hi_(std::move(hi)), n_(std::move(nodes)) {
  if (lo_.empty() || lo_.size() != hi_.size() || lo_.size() != n_.size()) {
    throw InputError("Grid: box and node counts must have matching dimension >= 1");
  }
  if (lo_.size() > 3) throw InputError("Grid: dimension must be 1, 2 or 3");
  node_count_ = 1;
  cell_count_ = 1;
  for (std::size_t k = 0; k < n_.size(); ++k) {
    if (n_[k] < 3) throw InputError("Grid: at least 3 nodes per axis required");
    if (!(hi_[k] > lo_[k]) || !std::isfinite(lo_[k]) || !std::isfinite(hi_[k])) {
      throw InputError("Grid: axis " + std::to_string(k) + " has non-positive extent");
    }
    node_count_ *= static_cast<std::size_t>(n_[k]);
    cell_count_ *= static_cast<std::size_t>(n_[k] - 1);
  }
}

Grid Grid::cube(int dim, double lo, double hi, int n) {
  return Grid(Vec(dim, lo), Vec(dim, hi), std::vector<int>(dim, n));
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (int k = 0; k < dim(); ++k) h = std::max(h, spacing(k));
  return h;
}

double Grid::min_spacing() const {
  double h = spacing(0);
  for (int k = 1; k < dim(); ++k) h = std::min(h, spacing(k));
  return h;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= spacing(k);
  return v;
}

double Grid::box_volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= hi_[k] - lo_[k];
  return v;
}

std::size_t Grid::node_index(std::span<const int> idx) const {
  std::size_t flat = 0, stride = 1;
  for (int k = 0; k < dim(); ++k) {
    flat += static_cast<std::size_t>(idx[k]) * stride;
    stride *= static_cast<std::size_t>(n_[k]);
  }
  return flat;
}

std::vector<int> Grid::node_multi_index(std::size_t flat) const {
  std::vector<int> idx(dim());
  for (int k = 0; k < dim(); ++k) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(n_[k]));
    flat /= static_cast<std::size_t>(n_[k]);
  }
  return idx;
}

std::size_t Grid::cell_index(std::span<const int> idx) const {
  std::size_t flat = 0, stride = 1;
  for (int k = 0; k < dim(); ++k) {
    flat += static_cast<std::size_t>(idx[k]) * stride;
    stride *= static_cast<std::size_t>(n_[k] - 1);
  }
  return flat;
}

std::vector<int> Grid::cell_multi_index(std::size_t flat) const {
  std::vector<int> idx(dim());
  for (int k = 0; k < dim(); ++k) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(n_[k] - 1));
    flat /= static_cast<std::size_t>(n_[k] - 1);
  }
  return idx;
}

Vec Grid::node_position(std::size_t flat) const {
  Vec x(dim());
  for (int k = 0; k < dim(); ++k) {
    const int i = static_cast<int>(flat % static_cast<std::size_t>(n_[k]));
    flat /= static_cast<std::size_t>(n_[k]);
    // Snap the last node onto hi exactly.
    x[k] = (i == n_[k] - 1) ? hi_[k] : lo_[k] + i * spacing(k);
  }
  return x;
}

Vec Grid::cell_lower(std::size_t flat) const {
  const auto idx = cell_multi_index(flat);
  Vec x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = lo_[k] + idx[k] * spacing(k);
  return x;
}

Vec Grid::cell_upper(std::size_t flat) const {
  const auto idx = cell_multi_index(flat);
  Vec x(dim());
  for (int k = 0; k < dim(); ++k) {
    x[k] = (idx[k] + 1 == n_[k] - 1) ? hi_[k] : lo_[k] + (idx[k] + 1) * spacing(k);
  }
  return x;
}

Vec Grid::cell_center(std::size_t flat) const {
  const auto idx = cell_multi_index(flat);
  Vec x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = lo_[k] + (idx[k] + 0.5) * spacing(k);
  return x;
}

std::vector<std::size_t> Grid::cell_corners(std::size_t flat_cell) const {
  const auto idx = cell_multi_index(flat_cell);
  const int d = dim();
  std::vector<std::size_t> out(std::size_t{1} << d);
  std::vector<int> node(d);
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (int k = 0; k < d; ++k) node[k] = idx[k] + static_cast<int>((c >> k) & 1U);
    out[c] = node_index(node);
  }
  return out;
}

bool Grid::contains(std::span<const double> x, double slack) const {
  for (int k = 0; k < dim(); ++k) {
    if (x[k] < lo_[k] - slack || x[k] > hi_[k] + slack) return false;
  }
  return true;
}

}  // namespace bdlab
