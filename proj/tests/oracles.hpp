#pragma once

// Independent numerical oracles for the tests. Nothing here calls the
// closed forms under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "bsar/geometry.hpp"
#include "bsar/grid.hpp"

namespace oracle {

using Fn = std::function<double(double)>;

/// Root of f on [lo, hi] with a sign change; bracket width tol.
inline double bisect(const Fn& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Minimizer of a unimodal f on [lo, hi].
inline double golden_min(const Fn& f, double lo, double hi, double tol = 1e-13) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    if (fa < fb) {
      hi = b; b = a; fb = fa; a = hi - g * (hi - lo); fa = f(a);
    } else {
      lo = a; a = b; fa = fb; b = lo + g * (hi - lo); fb = f(b);
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {
inline double simpson(const Fn& f, double a, double b, double fa, double fm,
                      double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature.
inline double integrate(const Fn& f, double a, double b, double eps = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, eps, 50);
}

/// Arc length of the ellipse with semi-axes a, b.
inline double ellipse_arc_length(double a, double b) {
  // split into quarters so the integrand is smooth on each piece
  const Fn speed = [&](double th) {
    return std::hypot(a * std::sin(th), b * std::cos(th));
  };
  return 4.0 * integrate(speed, 0.0, 0.5 * std::numbers::pi, 1e-13);
}

/// Solutions of F(y) = 0, G(y) = 0 in a box found by scanning a dense grid
/// for cells where both functions change sign, then polishing with Newton's
/// method on finite-difference Jacobians.
inline std::vector<bsar::Point2> intersect_2d(
    const std::function<double(bsar::Point2)>& F,
    const std::function<double(bsar::Point2)>& G, bsar::Point2 lo,
    bsar::Point2 hi, int n, double merge = 1e-6) {
  std::vector<bsar::Point2> roots;
  const double d1 = (hi.x1 - lo.x1) / n, d2 = (hi.x2 - lo.x2) / n;
  std::vector<double> fv((n + 1) * (n + 1)), gv((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const bsar::Point2 y{lo.x1 + i * d1, lo.x2 + j * d2};
      fv[i * (n + 1) + j] = F(y);
      gv[i * (n + 1) + j] = G(y);
    }
  }
  auto changes = [&](const std::vector<double>& v, int i, int j) {
    const double a = v[i * (n + 1) + j], b = v[(i + 1) * (n + 1) + j],
                 c = v[i * (n + 1) + j + 1], d = v[(i + 1) * (n + 1) + j + 1];
    const double mn = std::min({a, b, c, d}), mx = std::max({a, b, c, d});
    return mn <= 0.0 && mx >= 0.0;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!changes(fv, i, j) || !changes(gv, i, j)) continue;
      bsar::Point2 y{lo.x1 + (i + 0.5) * d1, lo.x2 + (j + 0.5) * d2};
      bool ok = true;
      for (int it = 0; it < 60; ++it) {
        const double h = 1e-7 * std::max(1.0, std::abs(y.x1) + std::abs(y.x2));
        const double f = F(y), g = G(y);
        const double f1 = (F({y.x1 + h, y.x2}) - F({y.x1 - h, y.x2})) / (2 * h);
        const double f2 = (F({y.x1, y.x2 + h}) - F({y.x1, y.x2 - h})) / (2 * h);
        const double g1 = (G({y.x1 + h, y.x2}) - G({y.x1 - h, y.x2})) / (2 * h);
        const double g2 = (G({y.x1, y.x2 + h}) - G({y.x1, y.x2 - h})) / (2 * h);
        const double det = f1 * g2 - f2 * g1;
        if (det == 0.0) { ok = false; break; }
        const double dx1 = (f * g2 - f2 * g) / det;
        const double dx2 = (f1 * g - f * g1) / det;
        y.x1 -= dx1;
        y.x2 -= dx2;
        if (std::hypot(dx1, dx2) < 1e-14) break;
      }
      if (!ok || std::abs(F(y)) > 1e-9 || std::abs(G(y)) > 1e-9) continue;
      const bool dup = std::any_of(roots.begin(), roots.end(), [&](bsar::Point2 r) {
        return std::hypot(r.x1 - y.x1, r.x2 - y.x2) < merge;
      });
      if (!dup) roots.push_back(y);
    }
  }
  return roots;
}

struct Peak {
  int i1 = 0;
  int i2 = 0;
  double value = 0.0;
};

/// Strict local maxima of |u| over the 3x3 neighbourhood, sorted by value,
/// keeping only peaks at least `separation` pixels from a larger one.
inline std::vector<Peak> local_maxima(const bsar::Image& u, double separation) {
  const int n1 = u.grid.x1.n, n2 = u.grid.x2.n;
  std::vector<Peak> all;
  for (int i = 1; i + 1 < n1; ++i) {
    for (int j = 1; j + 1 < n2; ++j) {
      const double v = std::abs(u.at(i, j));
      if (v == 0.0) continue;
      bool best = true;
      for (int di = -1; di <= 1 && best; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && std::abs(u.at(i + di, j + dj)) >= v) {
            // ties broken towards the lower index so plateaus keep one peak
            if (std::abs(u.at(i + di, j + dj)) > v || di < 0 || (di == 0 && dj < 0)) {
              best = false;
              break;
            }
          }
        }
      }
      if (best) all.push_back({i, j, v});
    }
  }
  std::sort(all.begin(), all.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  std::vector<Peak> kept;
  for (const auto& p : all) {
    const bool near = std::any_of(kept.begin(), kept.end(), [&](const Peak& q) {
      return std::hypot(p.i1 - q.i1, p.i2 - q.i2) < separation;
    });
    if (!near) kept.push_back(p);
  }
  return kept;
}

/// Distance in pixels between a raster index and a ground point.
inline double pixel_distance(const bsar::GridSpec& g, const Peak& p, bsar::Point2 x) {
  return std::hypot(p.i1 - g.x1.index_of(x.x1), p.i2 - g.x2.index_of(x.x2));
}

}  // namespace oracle
