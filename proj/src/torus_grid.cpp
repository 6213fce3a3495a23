#include "fmcf/torus_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fmcf/errors.hpp"

namespace fmcf {

PeriodicGrid::PeriodicGrid(int dimension, int resolution)
    : dimension_(dimension), resolution_(resolution) {
  if (dimension != 1 && dimension != 2) throw ContractError("unsupported dimension " + std::to_string(dimension));
  if (resolution < 4) throw ContractError("resolution must be at least 4, got " + std::to_string(resolution));
  spacing_ = 1.0 / resolution;
  if (spacing_ * resolution != 1.0)
    throw ContractError("resolution " + std::to_string(resolution) + " does not give h * N == 1 exactly");
  cell_volume_ = dimension == 1 ? spacing_ : spacing_ * spacing_;
  size_ = dimension == 1 ? static_cast<std::size_t>(resolution)
                         : static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
}

std::size_t PeriodicGrid::index(long i, long j) const {
  const long n = resolution_;
  i = ((i % n) + n) % n;
  if (dimension_ == 1) return static_cast<std::size_t>(i);
  j = ((j % n) + n) % n;
  return static_cast<std::size_t>(i + n * j);
}

std::array<long, 2> PeriodicGrid::coords(std::size_t node) const {
  const auto n = static_cast<std::size_t>(resolution_);
  if (dimension_ == 1) return {static_cast<long>(node), 0};
  return {static_cast<long>(node % n), static_cast<long>(node / n)};
}

std::size_t PeriodicGrid::shift(std::size_t node, int axis, long offset) const {
  auto c = coords(node);
  c[axis] += offset;
  return index(c[0], c[1]);
}

std::array<double, 2> PeriodicGrid::position(std::size_t node) const {
  const auto c = coords(node);
  return {static_cast<double>(c[0]) * spacing_, static_cast<double>(c[1]) * spacing_};
}

PeriodicGrid make_grid(int dimension, int resolution) { return PeriodicGrid(dimension, resolution); }

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : ScalarField(grid, std::move(values), {}) {}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values, std::vector<std::uint8_t> sentinel)
    : grid_(grid), values_(std::move(values)), sentinel_(std::move(sentinel)) {
  if (values_.size() != grid_.size()) throw ContractError("field size does not match grid");
  if (!sentinel_.empty() && sentinel_.size() != grid_.size())
    throw ContractError("sentinel mask size does not match grid");
  if (std::none_of(sentinel_.begin(), sentinel_.end(), [](std::uint8_t s) { return s != 0; })) sentinel_.clear();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (is_sentinel(k)) {
      values_[k] = 0.0;
    } else if (!std::isfinite(values_[k])) {
      throw ContractError("non-sentinel field value is not finite at node " + std::to_string(k));
    }
  }
}

ScalarField ScalarField::constant(const PeriodicGrid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

bool ScalarField::has_sentinels() const { return !sentinel_.empty(); }

double ScalarField::value(std::size_t node) const {
  return is_sentinel(node) ? -std::numeric_limits<double>::infinity() : values_[node];
}

void ScalarField::require_finite() const {
  if (has_sentinels()) throw NonFiniteFieldError();
}

VectorField::VectorField(PeriodicGrid grid, std::array<std::vector<double>, 2> components)
    : grid_(grid), components_(std::move(components)) {
  for (int a = 0; a < grid_.dimension(); ++a) {
    if (components_[a].size() != grid_.size()) throw ContractError("vector component size does not match grid");
    for (double x : components_[a])
      if (!std::isfinite(x)) throw ContractError("vector field component is not finite");
  }
  for (int a = grid_.dimension(); a < 2; ++a) components_[a].clear();
}

SupportMask::SupportMask(PeriodicGrid grid, std::vector<std::uint8_t> inside)
    : grid_(grid), inside_(std::move(inside)) {
  if (inside_.size() != grid_.size()) throw ContractError("mask size does not match grid");
  for (auto& b : inside_) b = b ? 1 : 0;
}

std::size_t SupportMask::count() const {
  return static_cast<std::size_t>(std::count(inside_.begin(), inside_.end(), std::uint8_t{1}));
}

double SupportMask::measure() const { return grid_.cell_volume() * static_cast<double>(count()); }

VectorField gradient(const ScalarField& f) {
  f.require_finite();
  const auto& grid = f.grid();
  const double inv_h = 1.0 / grid.spacing();
  const auto v = f.raw();
  std::array<std::vector<double>, 2> comps;
  for (int a = 0; a < grid.dimension(); ++a) {
    comps[a].resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) comps[a][k] = (v[grid.shift(k, a, 1)] - v[k]) * inv_h;
  }
  return VectorField(grid, std::move(comps));
}

ScalarField divergence(const VectorField& field) {
  const auto& grid = field.grid();
  const double inv_h = 1.0 / grid.spacing();
  std::vector<double> out(grid.size(), 0.0);
  for (int a = 0; a < grid.dimension(); ++a) {
    const auto c = field.component(a);
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] += (c[k] - c[grid.shift(k, a, -1)]) * inv_h;
  }
  return ScalarField(grid, std::move(out));
}

double integrate(const ScalarField& f) {
  f.require_finite();
  double sum = 0.0;
  for (double x : f.raw()) sum += x;
  return f.grid().cell_volume() * sum;
}

double perimeter_indicator(const SupportMask& mask) {
  const auto& grid = mask.grid();
  std::size_t crossings = 0;
  for (int a = 0; a < grid.dimension(); ++a)
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (mask.inside(k) != mask.inside(grid.shift(k, a, 1))) ++crossings;
  const double facet = grid.dimension() == 1 ? 1.0 : grid.spacing();
  return facet * static_cast<double>(crossings);
}

double dot(const ScalarField& a, const ScalarField& b) {
  a.require_finite();
  b.require_finite();
  if (!(a.grid() == b.grid())) throw ContractError("grid mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a.raw()[k] * b.raw()[k];
  return s;
}

double dot(const VectorField& a, const VectorField& b) {
  if (!(a.grid() == b.grid())) throw ContractError("grid mismatch");
  double s = 0.0;
  for (int ax = 0; ax < a.grid().dimension(); ++ax) {
    const auto x = a.component(ax);
    const auto y = b.component(ax);
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  }
  return s;
}

std::vector<int> label_components(const SupportMask& mask, int* count) {
  const auto& grid = mask.grid();
  std::vector<int> label(grid.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (!mask.inside(seed) || label[seed] >= 0) continue;
    label[seed] = next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (int a = 0; a < grid.dimension(); ++a) {
        for (long off : {-1L, 1L}) {
          const std::size_t nb = grid.shift(k, a, off);
          if (mask.inside(nb) && label[nb] < 0) {
            label[nb] = next;
            stack.push_back(nb);
          }
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

}  // namespace fmcf
