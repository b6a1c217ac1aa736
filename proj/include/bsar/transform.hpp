#pragma once

// Discretized elliptical Radon transform of the bistatic acquisition:
//
//   F V(s,t) = m(s,t) * integral over E(s,t) of a0(s,x) V(x) / |grad_x R| dl
//
// with m = mute_f * mute_g * region mute, and its adjoint. Inner products
// carry the cell measures (ds dt on data, dx1 dx2 on the scene), so the
// adjoint is the exact matrix transpose of the discrete forward operator
// scaled by (ds dt) / (dx1 dx2).

#include <optional>
#include <vector>

#include "bsar/cutoffs.hpp"
#include "bsar/geometry.hpp"
#include "bsar/grid.hpp"

namespace bsar {

/// 1 / (16 pi^2 A B).
double amplitude_a0(const AcquisitionConfig& cfg, double s, Point2 x);

/// |grad_x (A + B)| on the ground.
double range_gradient_norm(const AcquisitionConfig& cfg, double s, Point2 x);

struct OperatorOptions {
  Region region = Region::none;
  int ellipse_samples = 0;  ///< 0: max(64, 2 * circumference / pixel)
  int g_samples = kDefaultMuteSamples;
  int threads = 1;          ///< 0: hardware concurrency
};

enum class Half { upper, lower };

class BistaticOperator {
 public:
  BistaticOperator(const AcquisitionConfig& cfg,
                   std::optional<EpsilonSelection> sel, const GridSpec& grid,
                   OperatorOptions opts = {});

  [[nodiscard]] Sinogram forward(const Image& img) const;
  [[nodiscard]] Image adjoint(const Sinogram& sino) const;
  /// adjoint(forward(img)), optionally with apply_dt2 in between.
  [[nodiscard]] Image normal(const Image& img, bool dt2 = false) const;

  /// Combined data mute on the data raster, index is * nt + it.
  [[nodiscard]] const std::vector<double>& mutes() const { return mute_; }
  [[nodiscard]] int samples_for(double s, double t) const;

  [[nodiscard]] const AcquisitionConfig& config() const { return cfg_; }
  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] const OperatorOptions& options() const { return opts_; }
  [[nodiscard]] const std::optional<EpsilonSelection>& selection() const { return sel_; }

 private:
  struct Tap {
    int index;  ///< scene index i1 * nx2 + i2
    double weight;
  };
  // Bilinear taps of every in-raster ellipse sample of data cell (is, it),
  // already multiplied by the mute, amplitude and quadrature weight.
  void row_taps(int is, int it, std::vector<Tap>& taps) const;

  AcquisitionConfig cfg_;
  std::optional<EpsilonSelection> sel_;
  GridSpec grid_;
  OperatorOptions opts_;
  std::vector<double> mute_;
};

Sinogram forward(const AcquisitionConfig& cfg,
                 const std::optional<EpsilonSelection>& sel, const Image& img,
                 const GridSpec& grid, OperatorOptions opts = {});
Image adjoint(const AcquisitionConfig& cfg,
              const std::optional<EpsilonSelection>& sel, const Sinogram& sino,
              const GridSpec& grid, OperatorOptions opts = {});
Image normal(const AcquisitionConfig& cfg,
             const std::optional<EpsilonSelection>& sel, const Image& img,
             const GridSpec& grid, OperatorOptions opts = {});

/// Backprojection evaluated per pixel: sum over s of
/// a0(s,x) * (m d)(s, R(s,x)) * ds, linear interpolation in t. This is the
/// discretization of the continuous adjoint along a different path than the
/// transpose; it agrees with adjoint() up to interpolation error.
Image backproject_pixel_driven(const BistaticOperator& op, const Sinogram& sino);

/// -(d[i+1] - 2 d[i] + d[i-1]) along t in sample-index units (no 1/dt^2),
/// so d[i] = i^2 maps to -2. The first and last t samples copy their
/// neighbours. Requires nt >= 3.
Sinogram apply_dt2(const Sinogram& sino);

/// Zeroes pixels outside the chosen open half-plane at distance > margin
/// from the x1 axis.
Image spotlight_mask(const Image& img, Half half, double margin);

Sinogram forward_spotlight(const BistaticOperator& op, const Image& img,
                           Half half, double margin);
/// mask * adjoint * forward * mask; the mask is applied on both sides so the
/// output is supported in the illuminated half-plane.
Image normal_spotlight(const BistaticOperator& op, const Image& img, Half half,
                       double margin, bool dt2 = false);

}  // namespace bsar
