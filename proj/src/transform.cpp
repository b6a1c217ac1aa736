#include "bsar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsar/error.hpp"
#include "bsar/parallel.hpp"

namespace bsar {

namespace {

// Fixed number of accumulation blocks for the adjoint scatter; independent
// of the thread count so serial and parallel runs add in the same order.
constexpr int kAdjointBlocks = 16;

void check_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw GridMismatch("operand grid differs from the operator grid");
}

}  // namespace

double amplitude_a0(const AcquisitionConfig& cfg, double s, Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  return 1.0 / (16.0 * std::numbers::pi * std::numbers::pi * r.A * r.B);
}

double range_gradient_norm(const AcquisitionConfig& cfg, double s, Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  const double g1 = (x.x1 - cfg.alpha * s) / r.A + (x.x1 - s) / r.B;
  const double g2 = x.x2 / r.A + x.x2 / r.B;
  return std::hypot(g1, g2);
}

BistaticOperator::BistaticOperator(const AcquisitionConfig& cfg,
                                   std::optional<EpsilonSelection> sel,
                                   const GridSpec& grid, OperatorOptions opts)
    : cfg_(cfg), sel_(std::move(sel)), grid_(grid), opts_(opts) {
  cfg_.validate();
  grid_.validate();
  if (opts_.ellipse_samples != 0 && opts_.ellipse_samples < 8) {
    throw DomainError("ellipse_samples must be 0 (auto) or >= 8");
  }
  const int ns = grid_.s.n;
  const int nt = grid_.t.n;
  mute_.assign(grid_.data_size(), 0.0);
  parallel_for(static_cast<std::size_t>(ns), opts_.threads, [&](std::size_t is) {
    const double s = grid_.s.at(static_cast<int>(is));
    for (int it = 0; it < nt; ++it) {
      const double t = grid_.t.at(it);
      double m = mute_f(cfg_, s, t);
      if (m != 0.0) m *= region_mute(cfg_, opts_.region, s, t);
      if (m != 0.0) m *= mute_g(cfg_, sel_, s, t, opts_.g_samples);
      mute_[is * nt + it] = m;
    }
  });
}

int BistaticOperator::samples_for(double s, double t) const {
  if (opts_.ellipse_samples > 0) return opts_.ellipse_samples;
  const auto e = ground_ellipse(cfg_, s, t);
  if (!e || e->degenerate) return 0;
  const double pix = std::min(grid_.x1.step(), grid_.x2.step());
  const double n = std::ceil(2.0 * e->circumference_estimate() / pix);
  return std::max(64, static_cast<int>(n));
}

void BistaticOperator::row_taps(int is, int it, std::vector<Tap>& taps) const {
  taps.clear();
  const double m = mute_[static_cast<std::size_t>(is) * grid_.t.n + it];
  if (m == 0.0) return;
  const double s = grid_.s.at(is);
  const double t = grid_.t.at(it);
  const int n = samples_for(s, t);
  if (n == 0) return;
  const auto e = ground_ellipse(cfg_, s, t);
  if (!e || e->degenerate) return;
  const int n1 = grid_.x1.n;
  const int n2 = grid_.x2.n;
  for (const auto& p : ellipse_points(cfg_, s, t, n)) {
    const double f1 = grid_.x1.index_of(p.x.x1);
    const double f2 = grid_.x2.index_of(p.x.x2);
    if (!(f1 >= 0.0 && f2 >= 0.0 && f1 <= n1 - 1 && f2 <= n2 - 1)) continue;
    const int i1 = std::min(static_cast<int>(f1), n1 - 2);
    const int i2 = std::min(static_cast<int>(f2), n2 - 2);
    const double u = f1 - i1;
    const double v = f2 - i2;
    const double w = m * amplitude_a0(cfg_, s, p.x) * p.weight /
                     range_gradient_norm(cfg_, s, p.x);
    const int base = i1 * n2 + i2;
    taps.push_back({base, w * (1 - u) * (1 - v)});
    taps.push_back({base + n2, w * u * (1 - v)});
    taps.push_back({base + 1, w * (1 - u) * v});
    taps.push_back({base + n2 + 1, w * u * v});
  }
}

Sinogram BistaticOperator::forward(const Image& img) const {
  img.check();
  check_same_grid(img.grid, grid_);
  Sinogram out = Sinogram::zeros(grid_);
  const int nt = grid_.t.n;
  parallel_for(static_cast<std::size_t>(grid_.s.n), opts_.threads,
               [&](std::size_t is) {
                 std::vector<Tap> taps;
                 for (int it = 0; it < nt; ++it) {
                   row_taps(static_cast<int>(is), it, taps);
                   double acc = 0.0;
                   for (const auto& tap : taps) acc += tap.weight * img.values[tap.index];
                   out.values[is * nt + it] = acc;
                 }
               });
  return out;
}

Image BistaticOperator::adjoint(const Sinogram& sino) const {
  sino.check();
  check_same_grid(sino.grid, grid_);
  const int ns = grid_.s.n;
  const int nt = grid_.t.n;
  const int blocks = std::min(kAdjointBlocks, ns);
  std::vector<std::vector<double>> partial(
      static_cast<std::size_t>(blocks), std::vector<double>(grid_.scene_size(), 0.0));
  parallel_for(static_cast<std::size_t>(blocks), opts_.threads, [&](std::size_t b) {
    const int lo = static_cast<int>(b * ns / blocks);
    const int hi = static_cast<int>((b + 1) * ns / blocks);
    auto& acc = partial[b];
    std::vector<Tap> taps;
    for (int is = lo; is < hi; ++is) {
      for (int it = 0; it < nt; ++it) {
        const double d = sino.values[static_cast<std::size_t>(is) * nt + it];
        if (d == 0.0) continue;
        row_taps(is, it, taps);
        for (const auto& tap : taps) acc[tap.index] += tap.weight * d;
      }
    }
  });
  Image out = Image::zeros(grid_);
  const double scale = grid_.data_cell() / grid_.cell_area();
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] += acc[i];
  }
  for (auto& v : out.values) v *= scale;
  return out;
}

Image BistaticOperator::normal(const Image& img, bool dt2) const {
  Sinogram d = forward(img);
  if (dt2) d = apply_dt2(d);
  return adjoint(d);
}

Sinogram forward(const AcquisitionConfig& cfg,
                 const std::optional<EpsilonSelection>& sel, const Image& img,
                 const GridSpec& grid, OperatorOptions opts) {
  return BistaticOperator(cfg, sel, grid, opts).forward(img);
}

Image adjoint(const AcquisitionConfig& cfg,
              const std::optional<EpsilonSelection>& sel, const Sinogram& sino,
              const GridSpec& grid, OperatorOptions opts) {
  return BistaticOperator(cfg, sel, grid, opts).adjoint(sino);
}

Image normal(const AcquisitionConfig& cfg,
             const std::optional<EpsilonSelection>& sel, const Image& img,
             const GridSpec& grid, OperatorOptions opts) {
  return BistaticOperator(cfg, sel, grid, opts).normal(img);
}

Image backproject_pixel_driven(const BistaticOperator& op, const Sinogram& sino) {
  sino.check();
  const GridSpec& g = op.grid();
  check_same_grid(sino.grid, g);
  const auto& cfg = op.config();
  const auto& mute = op.mutes();
  const int nt = g.t.n;
  Image out = Image::zeros(g);
  parallel_for(static_cast<std::size_t>(g.x1.n), op.options().threads,
               [&](std::size_t i1) {
                 for (int i2 = 0; i2 < g.x2.n; ++i2) {
                   const Point2 x = g.pixel(static_cast<int>(i1), i2);
                   double acc = 0.0;
                   for (int is = 0; is < g.s.n; ++is) {
                     const double s = g.s.at(is);
                     const double f = g.t.index_of(travel_time(cfg, s, x));
                     if (!(f >= 0.0 && f <= nt - 1)) continue;
                     const int it = std::min(static_cast<int>(f), nt - 2);
                     const double u = f - it;
                     const std::size_t k = static_cast<std::size_t>(is) * nt + it;
                     const double md = (1 - u) * mute[k] * sino.values[k] +
                                       u * mute[k + 1] * sino.values[k + 1];
                     acc += amplitude_a0(cfg, s, x) * md;
                   }
                   out.at(static_cast<int>(i1), i2) = acc * g.s.step();
                 }
               });
  return out;
}

Sinogram apply_dt2(const Sinogram& sino) {
  sino.check();
  const int ns = sino.grid.s.n;
  const int nt = sino.grid.t.n;
  if (nt < 3) throw GridMismatch("apply_dt2 needs at least 3 time samples");
  Sinogram out = Sinogram::zeros(sino.grid);
  for (int is = 0; is < ns; ++is) {
    for (int it = 1; it + 1 < nt; ++it) {
      out.at(is, it) = -(sino.at(is, it + 1) - 2.0 * sino.at(is, it) + sino.at(is, it - 1));
    }
    out.at(is, 0) = out.at(is, 1);
    out.at(is, nt - 1) = out.at(is, nt - 2);
  }
  return out;
}

Image spotlight_mask(const Image& img, Half half, double margin) {
  if (!(margin > 0.0)) throw DomainError("spotlight margin must be positive");
  Image out = img;
  for (int i1 = 0; i1 < img.grid.x1.n; ++i1) {
    for (int i2 = 0; i2 < img.grid.x2.n; ++i2) {
      const double x2 = img.grid.x2.at(i2);
      const bool lit = half == Half::upper ? x2 > margin : x2 < -margin;
      if (!lit) out.at(i1, i2) = 0.0;
    }
  }
  return out;
}

Sinogram forward_spotlight(const BistaticOperator& op, const Image& img,
                           Half half, double margin) {
  return op.forward(spotlight_mask(img, half, margin));
}

Image normal_spotlight(const BistaticOperator& op, const Image& img, Half half,
                       double margin, bool dt2) {
  return spotlight_mask(op.normal(spotlight_mask(img, half, margin), dt2), half,
                        margin);
}

}  // namespace bsar
