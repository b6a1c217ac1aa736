#include "bsar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bsar/error.hpp"

namespace bsar {

int Axis::nearest(double v) const {
  const long i = std::lround(index_of(v));
  return static_cast<int>(std::clamp<long>(i, 0, n - 1));
}

void GridSpec::validate() const {
  for (const Axis* a : {&x1, &x2, &s, &t}) {
    if (a->n < 2 || !(a->lo < a->hi)) {
      throw GridMismatch("grid axes need n >= 2 and increasing bounds");
    }
  }
}

double Image::sample(Point2 x) const {
  const double f1 = grid.x1.index_of(x.x1);
  const double f2 = grid.x2.index_of(x.x2);
  if (!(f1 >= 0.0 && f2 >= 0.0 && f1 <= grid.x1.n - 1 && f2 <= grid.x2.n - 1)) {
    return 0.0;
  }
  const int i1 = std::min(static_cast<int>(f1), grid.x1.n - 2);
  const int i2 = std::min(static_cast<int>(f2), grid.x2.n - 2);
  const double u = f1 - i1;
  const double v = f2 - i2;
  return (1 - u) * (1 - v) * at(i1, i2) + u * (1 - v) * at(i1 + 1, i2) +
         (1 - u) * v * at(i1, i2 + 1) + u * v * at(i1 + 1, i2 + 1);
}

void Image::check() const {
  grid.validate();
  if (values.size() != grid.scene_size()) {
    throw GridMismatch("image values do not match the scene raster");
  }
}

void Sinogram::check() const {
  grid.validate();
  if (values.size() != grid.data_size()) {
    throw GridMismatch("sinogram values do not match the data raster");
  }
}

Image reflect_x2(const Image& img) {
  Image out = img;
  const int n2 = img.grid.x2.n;
  for (int i1 = 0; i1 < img.grid.x1.n; ++i1) {
    for (int i2 = 0; i2 < n2; ++i2) out.at(i1, i2) = img.at(i1, n2 - 1 - i2);
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw GridMismatch("dot product of unequal sizes");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace bsar
