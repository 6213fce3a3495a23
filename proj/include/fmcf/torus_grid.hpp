#pragma once

// Uniform periodic grids on the unit torus (dimension 1 or 2), node fields
// living on them, and the discrete operators shared by every solver.
//
// Node (i, j) sits at (i h, j h) with h = 1/N. The linear index is i + N j.
// The gradient is a forward difference and the divergence a backward
// difference, so that <div v, f> = -<v, grad f> holds exactly in the
// (unweighted) node inner product.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fmcf {

class PeriodicGrid {
 public:
  /// Throws ContractError for dimension outside {1, 2}, N < 4, or an N for
  /// which (1/N) * N is not exactly 1 in double precision.
  PeriodicGrid(int dimension, int resolution);

  int dimension() const { return dimension_; }
  int resolution() const { return resolution_; }
  double spacing() const { return spacing_; }
  /// h^n, the midpoint quadrature weight of every node.
  double cell_volume() const { return cell_volume_; }
  std::size_t size() const { return size_; }

  /// Linear index of (i, j) with both coordinates wrapped modulo N.
  std::size_t index(long i, long j = 0) const;
  /// Per-axis integer coordinates of a node.
  std::array<long, 2> coords(std::size_t node) const;
  /// Neighbour of `node` displaced by `offset` along `axis`, with wrap-around.
  std::size_t shift(std::size_t node, int axis, long offset) const;
  /// Physical position of a node in [0, 1)^n (unused axes are 0).
  std::array<double, 2> position(std::size_t node) const;

  bool operator==(const PeriodicGrid& other) const {
    return dimension_ == other.dimension_ && resolution_ == other.resolution_;
  }

 private:
  int dimension_;
  int resolution_;
  double spacing_;
  double cell_volume_;
  std::size_t size_;
};

PeriodicGrid make_grid(int dimension, int resolution);

/// Node values on a grid. A node may carry the explicit "-inf" sentinel flag;
/// its stored value is then meaningless and reads as -infinity through value().
class ScalarField {
 public:
  ScalarField(PeriodicGrid grid, std::vector<double> values);
  ScalarField(PeriodicGrid grid, std::vector<double> values, std::vector<std::uint8_t> sentinel);

  static ScalarField constant(const PeriodicGrid& grid, double value);
  template <class Fn>
  static ScalarField from_function(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.position(k));
    return ScalarField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  /// Raw stored values; sentinel nodes hold 0.
  std::span<const double> raw() const { return values_; }
  bool is_sentinel(std::size_t node) const { return !sentinel_.empty() && sentinel_[node] != 0; }
  bool has_sentinels() const;
  /// Extended-real value: -infinity on sentinel nodes.
  double value(std::size_t node) const;
  double operator[](std::size_t node) const { return value(node); }

  /// Throws NonFiniteFieldError when any sentinel is present.
  void require_finite() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
  std::vector<std::uint8_t> sentinel_;  // empty means "no sentinels"
};

class VectorField {
 public:
  VectorField(PeriodicGrid grid, std::array<std::vector<double>, 2> components);

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> component(int axis) const { return components_[axis]; }

 private:
  PeriodicGrid grid_;
  std::array<std::vector<double>, 2> components_;
};

class SupportMask {
 public:
  SupportMask(PeriodicGrid grid, std::vector<std::uint8_t> inside);

  const PeriodicGrid& grid() const { return grid_; }
  bool inside(std::size_t node) const { return inside_[node] != 0; }
  std::size_t count() const;
  /// Lebesgue measure h^n * count.
  double measure() const;
  bool empty() const { return count() == 0; }
  bool full() const { return count() == inside_.size(); }

 private:
  PeriodicGrid grid_;
  std::vector<std::uint8_t> inside_;
};

/// Forward differences with periodic wrap.
VectorField gradient(const ScalarField& f);
/// Backward differences with periodic wrap; the negative adjoint of gradient().
ScalarField divergence(const VectorField& v);
/// Midpoint quadrature h^n * sum(values). Rejects sentinel nodes.
double integrate(const ScalarField& f);
/// h^(n-1) times the number of grid facets across which the mask changes.
double perimeter_indicator(const SupportMask& mask);

/// Unweighted node inner products, used for the adjointness identity.
double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField& a, const VectorField& b);

/// Connected components of a mask on the torus (nearest-neighbour adjacency).
/// Returns one label per node, -1 outside the mask, labels 0..k-1 inside.
std::vector<int> label_components(const SupportMask& mask, int* count = nullptr);

}  // namespace fmcf
