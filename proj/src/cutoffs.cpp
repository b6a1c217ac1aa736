#include "bsar/cutoffs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "bsar/error.hpp"

namespace bsar {

namespace {

double smooth_zero(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double pencil_radius(const AcquisitionConfig& cfg, double s, double k) {
  return std::sqrt(std::max(0.0, pencil_radius_squared(cfg, s, k)));
}

// Plateau of one on [0.05, 0.95] of the normalized coordinate u, zero
// outside (0, 1).
double plateau(double u) {
  constexpr double edge = 0.05;
  return (1.0 - bump(u, 0.0, edge)) * bump(u, 1.0 - edge, 1.0);
}

double normalized(double v, double lo, double hi) {
  return (v - lo) / (hi - lo);
}

}  // namespace

double bump(double u, double lo, double hi) {
  if (u <= lo) return 1.0;
  if (u >= hi) return 0.0;
  const double x = (u - lo) / (hi - lo);
  const double a = smooth_zero(1.0 - x);
  const double b = smooth_zero(x);
  return a / (a + b);
}

bool EpsilonSelection::satisfies_bounds(const AcquisitionConfig& cfg) const {
  const double r = pencil_radius(cfg, s1, k1);
  const double cap = std::min({beta - 1.0, 1.0 - k1, 0.25}) / 6.0;
  return epsilon > 0.0 && r > 12.0 * epsilon && epsilon < cap;
}

EpsilonSelection select_epsilon(const AcquisitionConfig& cfg,
                                std::optional<double> s1_opt) {
  if (!(cfg.alpha < -1.0)) {
    throw DomainError("collar selection requires alpha < -1");
  }
  const double s1 = s1_opt.value_or(cfg.s_min);
  if (!(s1 > cfg.s0())) {
    throw UndefinedRegion("infeasible aperture: s1 must exceed s0 for the "
                          "avoided-point collars");
  }
  const double beta = cfg.beta();
  const double eps_cap = std::min((beta - 1.0) / 6.0, 1.0 / 24.0);
  double target = 13.0 * eps_cap;
  const double r_top = pencil_radius(cfg, s1, 1.0);
  if (!(target < r_top)) target = 0.5 * r_top;

  // r(s1, .) increases on (k0, 1]
  double lo = k0(cfg, s1);
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (pencil_radius(cfg, s1, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  EpsilonSelection sel;
  sel.s1 = s1;
  sel.k1 = 0.5 * (lo + hi);
  sel.beta = beta;
  const double r = pencil_radius(cfg, s1, sel.k1);
  sel.epsilon = 0.9 * std::min({r / 12.0, (beta - 1.0) / 6.0,
                                (1.0 - sel.k1) / 6.0, 1.0 / 24.0});
  return sel;
}

double psi1(const EpsilonSelection& sel, Point2 x) {
  return bump(std::abs(x.x2), sel.epsilon, 2.0 * sel.epsilon);
}

double psi2(const AcquisitionConfig& cfg, const EpsilonSelection& sel,
            double s, Point2 x) {
  const double dev = std::abs(pencil_ratio(cfg, s, x) - 1.0);
  return bump(dev, sel.epsilon, 2.0 * sel.epsilon);
}

double collar_distance(const AcquisitionConfig& cfg,
                       const EpsilonSelection& sel, double s, Point2 x) {
  const double dev = std::abs(pencil_ratio(cfg, s, x) - 1.0);
  return std::max(std::abs(x.x2), dev) / sel.epsilon;
}

bool in_D(const AcquisitionConfig& cfg, const EpsilonSelection& sel, double s,
          Point2 x, double multiple) {
  return collar_distance(cfg, sel, s, x) < multiple;
}

double window_weight(double u, double lo, double hi, double taper) {
  if (u < lo || u > hi) return 0.0;
  const double w = taper * (hi - lo);
  if (!(w > 0.0)) return 1.0;
  return (1.0 - bump(u, lo, lo + w)) * bump(u, hi - w, hi);
}

double mute_f(const AcquisitionConfig& cfg, double s, double t) {
  const double thr = ground_threshold(cfg, s);
  const double near =
      1.0 - bump(t, thr * (1.0 + cfg.f_margin), thr * (1.0 + 2.0 * cfg.f_margin));
  if (near == 0.0) return 0.0;
  double w = near * window_weight(s, cfg.s_min, cfg.s_max, cfg.window_taper);
  if (cfg.t_max > cfg.t_min) {
    w *= window_weight(t, cfg.t_min, cfg.t_max, cfg.window_taper);
  }
  return w;
}

double mute_g(const AcquisitionConfig& cfg,
              const std::optional<EpsilonSelection>& sel, double s, double t,
              int samples) {
  if (!sel || !(cfg.alpha < -1.0)) return 1.0;
  const auto e = ground_ellipse(cfg, s, t);
  if (!e) return 1.0;
  double cmin = std::numeric_limits<double>::infinity();
  if (e->degenerate) {
    cmin = collar_distance(cfg, *sel, s, between_point(cfg, s));
  } else {
    for (const auto& p : ellipse_points(cfg, s, t, samples)) {
      cmin = std::min(cmin, collar_distance(cfg, *sel, s, p.x));
    }
  }
  return 1.0 - bump(cmin, 4.0, 5.0);
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::none: return "none";
    case Region::O1: return "o1";
    case Region::O2: return "o2";
    case Region::O3: return "o3";
  }
  return "none";
}

std::string_view to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::O1: return "O1";
    case RegionLabel::O2: return "O2";
    case RegionLabel::O3: return "O3";
    case RegionLabel::boundary: return "boundary";
  }
  return "boundary";
}

Region parse_region(std::string_view text) {
  std::string low(text);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "none") return Region::none;
  if (low == "o1") return Region::O1;
  if (low == "o2") return Region::O2;
  if (low == "o3") return Region::O3;
  throw ConfigError("region must be one of none, o1, o2, o3 (got '" + low + "')");
}

RegionLabel classify_region(const AcquisitionConfig& cfg, double s, double t) {
  if (!(cfg.alpha < 0.0) || cfg.common_midpoint()) {
    throw DomainError("region classification requires alpha < 0, alpha != -1");
  }
  const double s0 = cfg.s0();
  if (std::abs(s - s0) <= kRegionBand * s0) return RegionLabel::boundary;
  if (s < s0) return RegionLabel::O1;
  const auto [tm, tp] = critical_times(cfg, s);
  if (std::abs(t - tm) <= kRegionBand * t || std::abs(t - tp) <= kRegionBand * t) {
    return RegionLabel::boundary;
  }
  return (t > tm && t < tp) ? RegionLabel::O2 : RegionLabel::O3;
}

double region_mute(const AcquisitionConfig& cfg, Region which, double s,
                   double t) {
  if (which == Region::none) return 1.0;
  if (!(cfg.alpha < 0.0) || cfg.common_midpoint()) {
    throw DomainError("region mutes require alpha < 0, alpha != -1");
  }
  if (!(cfg.t_max > cfg.t_min)) {
    throw DomainError("region mutes require a time window");
  }
  const double s0 = cfg.s0();
  if (which == Region::O1) {
    const double hi = std::min(s0, cfg.s_max);
    if (!(hi > cfg.s_min)) return 0.0;
    return plateau(normalized(s, cfg.s_min, hi)) *
           plateau(normalized(t, cfg.t_min, cfg.t_max));
  }
  const double lo = std::max(s0, cfg.s_min);
  if (!(s > lo) || !(s < cfg.s_max)) return 0.0;
  const double ws = plateau(normalized(s, lo, cfg.s_max));
  if (ws == 0.0) return 0.0;
  const auto [tm, tp] = critical_times(cfg, s);
  if (which == Region::O2) {
    return ws * plateau(normalized(t, tm, tp));
  }
  double wt = 0.0;
  if (t < tm && tm > cfg.t_min) {
    wt = plateau(normalized(t, cfg.t_min, tm));
  } else if (t > tp && cfg.t_max > tp) {
    wt = plateau(normalized(t, tp, cfg.t_max));
  }
  return ws * wt;
}

}  // namespace bsar
