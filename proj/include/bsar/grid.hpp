#pragma once

// Uniform rasters of the scene (x1, x2) and of the data (s, t).
// Sample i of an axis sits at lo + i (hi - lo) / (n - 1).

#include <cstddef>
#include <vector>

#include "bsar/geometry.hpp"

namespace bsar {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  [[nodiscard]] double step() const { return (hi - lo) / (n - 1); }
  [[nodiscard]] double at(int i) const { return lo + i * step(); }
  /// Fractional index of v.
  [[nodiscard]] double index_of(double v) const { return (v - lo) / step(); }
  /// Nearest sample index, clamped to the axis.
  [[nodiscard]] int nearest(double v) const;

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GridSpec {
  Axis x1;
  Axis x2;
  Axis s;
  Axis t;

  /// Throws GridMismatch unless every axis has n >= 2 and lo < hi.
  void validate() const;
  [[nodiscard]] std::size_t scene_size() const {
    return static_cast<std::size_t>(x1.n) * x2.n;
  }
  [[nodiscard]] std::size_t data_size() const {
    return static_cast<std::size_t>(s.n) * t.n;
  }
  [[nodiscard]] double cell_area() const { return x1.step() * x2.step(); }
  [[nodiscard]] double data_cell() const { return s.step() * t.step(); }
  [[nodiscard]] Point2 pixel(int i1, int i2) const { return {x1.at(i1), x2.at(i2)}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Scene values, index i1 * nx2 + i2.
struct Image {
  GridSpec grid;
  std::vector<double> values;

  static Image zeros(const GridSpec& g) { return {g, std::vector<double>(g.scene_size(), 0.0)}; }
  [[nodiscard]] double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * grid.x2.n + i2]; }
  [[nodiscard]] double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * grid.x2.n + i2]; }
  /// Bilinear interpolation, zero outside the raster.
  [[nodiscard]] double sample(Point2 x) const;
  /// Throws GridMismatch when values do not match the scene raster.
  void check() const;
};

/// Data values, index is * nt + it.
struct Sinogram {
  GridSpec grid;
  std::vector<double> values;

  static Sinogram zeros(const GridSpec& g) { return {g, std::vector<double>(g.data_size(), 0.0)}; }
  [[nodiscard]] double& at(int is, int it) { return values[static_cast<std::size_t>(is) * grid.t.n + it]; }
  [[nodiscard]] double at(int is, int it) const { return values[static_cast<std::size_t>(is) * grid.t.n + it]; }
  void check() const;
};

/// x2 -> -x2 on a raster symmetric about the x1 axis.
Image reflect_x2(const Image& img);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace bsar
