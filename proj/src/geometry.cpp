#include "bsar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsar/error.hpp"

namespace bsar {

namespace {

void require_pencil(const AcquisitionConfig& cfg, const char* what) {
  if (!(cfg.alpha < 0.0)) {
    std::ostringstream os;
    os << what << " requires alpha < 0 (got alpha=" << cfg.alpha << ")";
    throw DomainError(os.str());
  }
}

void require_not_midpoint(const AcquisitionConfig& cfg, const char* what) {
  if (cfg.common_midpoint()) {
    throw DomainError(std::string(what) +
                      " is not defined in common-midpoint mode (alpha=-1)");
  }
}

double sq(double v) { return v * v; }

}  // namespace

void AcquisitionConfig::validate() const {
  if (!std::isfinite(alpha) || alpha == 1.0) {
    throw DomainError("alpha=1 is the monostatic case and is excluded");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("height h must be positive");
  }
  if (!(s_min > 0.0) || !(s_max > s_min)) {
    throw DomainError("aperture must satisfy 0 < s_min < s_max");
  }
  if (t_max < t_min) {
    throw DomainError("time window must satisfy t_min <= t_max");
  }
  if (!(f_margin > 0.0) || !(window_taper >= 0.0 && window_taper < 0.5)) {
    throw DomainError("f_margin must be > 0 and window_taper in [0, 0.5)");
  }
}

double AcquisitionConfig::beta() const {
  require_pencil(*this, "beta");
  return std::sqrt(-alpha);
}

double AcquisitionConfig::s0() const {
  require_pencil(*this, "s0");
  return std::abs(s0_from_alpha(alpha, h));
}

double s0_from_alpha(double alpha, double h) {
  return h * (alpha + 1.0) / (std::sqrt(-alpha) * (alpha - 1.0));
}

double s0_from_beta(double beta, double h) {
  const double b2 = beta * beta;
  return h * (b2 - 1.0) / (beta * (b2 + 1.0));
}

PlatformPositions platform_positions(const AcquisitionConfig& cfg, double s) {
  return {{cfg.alpha * s, 0.0, cfg.h}, {s, 0.0, cfg.h}};
}

Ranges bistatic_ranges(const AcquisitionConfig& cfg, double s, Point2 x) {
  const double q = x.x2 * x.x2 + cfg.h * cfg.h;
  return {std::sqrt(sq(x.x1 - cfg.alpha * s) + q), std::sqrt(sq(x.x1 - s) + q)};
}

double ground_threshold(const AcquisitionConfig& cfg, double s) {
  return std::sqrt(sq((cfg.alpha - 1.0) * s) + 4.0 * cfg.h * cfg.h);
}

Point2 between_point(const AcquisitionConfig& cfg, double s) {
  return {0.5 * (cfg.alpha + 1.0) * s, 0.0};
}

Point2 GroundEllipse::point_at(double theta) const {
  return {center_x1 + ag * std::cos(theta), bg * std::sin(theta)};
}

double GroundEllipse::circumference_estimate() const {
  if (degenerate) return 0.0;
  const double hq = sq((ag - bg) / (ag + bg));
  return std::numbers::pi * (ag + bg) *
         (1.0 + 3.0 * hq / (10.0 + std::sqrt(4.0 - 3.0 * hq)));
}

double GroundEllipse::implicit(Point2 x) const {
  return sq(x.x1 - center_x1) / (ag * ag) + sq(x.x2) / (bg * bg) - 1.0;
}

std::optional<GroundEllipse> ground_ellipse(const AcquisitionConfig& cfg,
                                            double s, double t) {
  const double threshold = ground_threshold(cfg, s);
  const bool at_threshold = std::abs(t - threshold) <= kDegenerateTolerance * t;
  if (t < threshold && !at_threshold) return std::nullopt;

  GroundEllipse e;
  e.s = s;
  e.t = t;
  e.center_x1 = 0.5 * (1.0 + cfg.alpha) * s;
  e.focal_c = 0.5 * std::abs(1.0 - cfg.alpha) * s;
  e.a3 = 0.5 * t;
  const double b3sq = e.a3 * e.a3 - e.focal_c * e.focal_c;
  e.b3 = std::sqrt(std::max(b3sq, 0.0));
  const double bgsq = b3sq - cfg.h * cfg.h;
  if (at_threshold || !(bgsq > 0.0)) {
    e.degenerate = true;
    return e;
  }
  e.bg = std::sqrt(bgsq);
  e.ag = e.a3 * e.bg / e.b3;
  return e;
}

std::vector<EllipseSample> ellipse_points(const AcquisitionConfig& cfg,
                                          double s, double t, int n) {
  if (n < 8) throw DomainError("ellipse_points needs at least 8 samples");
  const auto e = ground_ellipse(cfg, s, t);
  if (!e) throw DegenerateGeometry("iso-range ellipse is empty");
  if (e->degenerate) {
    throw DegenerateGeometry("iso-range ellipse degenerates to a point");
  }
  std::vector<EllipseSample> out(static_cast<std::size_t>(n));
  const double dtheta = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    const double th = j * dtheta;
    const double c = std::cos(th);
    const double sn = std::sin(th);
    const double speed = std::sqrt(sq(e->ag * sn) + sq(e->bg * c));
    out[j] = {{e->center_x1 + e->ag * c, e->bg * sn}, speed * dtheta};
  }
  return out;
}

ProlateCoords prolate_from_ground(const AcquisitionConfig& cfg, double s,
                                  Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  const double focal = std::abs(1.0 - cfg.alpha) * s;
  const double ch = std::max(1.0, (r.A + r.B) / focal);
  const double cp = std::clamp((r.A - r.B) / focal, -1.0, 1.0);
  return {std::acosh(ch), std::acos(cp)};
}

Ranges ranges_from_prolate(const AcquisitionConfig& cfg, double s,
                           ProlateCoords pc) {
  const double a = 0.5 * std::abs(1.0 - cfg.alpha) * s;
  const double ch = std::cosh(pc.rho);
  const double cp = std::cos(pc.phi);
  return {a * (ch + cp), a * (ch - cp)};
}

Point2 ground_from_prolate(const AcquisitionConfig& cfg, double s,
                           ProlateCoords pc, bool upper) {
  const double a = 0.5 * std::abs(1.0 - cfg.alpha) * s;
  const double x1 = 0.5 * (1.0 + cfg.alpha) * s +
                    0.5 * (1.0 - cfg.alpha) * s * std::cosh(pc.rho) *
                        std::cos(pc.phi);
  const double x2sq = sq(a * std::sinh(pc.rho) * std::sin(pc.phi)) - cfg.h * cfg.h;
  if (x2sq < -1e-12 * cfg.h * cfg.h) {
    throw DegenerateGeometry("prolate coordinates do not reach the ground");
  }
  const double x2 = std::sqrt(std::max(0.0, x2sq));
  return {x1, upper ? x2 : -x2};
}

double pencil_ratio(const AcquisitionConfig& cfg, double s, Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  return cfg.beta() * r.B / r.A;
}

double pencil_radius_squared(const AcquisitionConfig& cfg, double s, double k) {
  const double b2 = -cfg.alpha;
  const double den = b2 - k * k;
  return b2 * s * s * k * k * sq(b2 + 1.0) / (den * den) - cfg.h * cfg.h;
}

CirclePencilElement circle_C(const AcquisitionConfig& cfg, double s, double k) {
  require_pencil(cfg, "circle_C");
  if (!(s > 0.0) || !(k > 0.0)) {
    throw DomainError("circle_C requires s > 0 and k > 0");
  }
  const double beta = cfg.beta();
  CirclePencilElement el;
  el.s = s;
  el.k = k;
  if (std::abs(k - beta) <= 1e-12 * beta) {
    el.kind = PencilKind::vertical_line;
    el.line_x1 = 0.5 * (1.0 - beta * beta) * s;
    return el;
  }
  const double b2 = beta * beta;
  el.center_x1 = b2 * s * (1.0 + k * k) / (b2 - k * k);
  const double r2 = pencil_radius_squared(cfg, s, k);
  if (r2 > 1e-12 * cfg.h * cfg.h) {
    el.kind = PencilKind::circle;
    el.radius = std::sqrt(r2);
  } else {
    el.kind = PencilKind::empty;
  }
  return el;
}

CirclePencilElement sigma2_circle(const AcquisitionConfig& cfg, double s) {
  return circle_C(cfg, s, 1.0);
}

double k0(const AcquisitionConfig& cfg, double s) {
  require_pencil(cfg, "k0");
  if (!(s > cfg.s0())) {
    throw UndefinedRegion("k0(s) is only defined for s > s0");
  }
  const double beta = cfg.beta();
  const double p = beta * s * (beta * beta + 1.0);
  const double h = cfg.h;
  // positive root of h k^2 + p k - h beta^2, in cancellation-free form
  return 2.0 * h * beta * beta / (p + std::sqrt(p * p + 4.0 * h * h * beta * beta));
}

std::pair<double, double> circle_endpoints(const AcquisitionConfig& cfg,
                                           double s, double k) {
  const double lo = k0(cfg, s);
  if (!(k > lo) || !(k < cfg.beta())) {
    throw DegenerateGeometry("circle endpoints need k in (k0(s), beta)");
  }
  const auto c = circle_C(cfg, s, k);
  if (c.kind != PencilKind::circle) {
    throw DegenerateGeometry("pencil element is not a circle");
  }
  return {c.center_x1 - c.radius, c.center_x1 + c.radius};
}

namespace {

// Signed radius^2 of the rank-drop circle and its center.
std::pair<double, double> sigma2_center_r2(const AcquisitionConfig& cfg,
                                           double s) {
  const double a = cfg.alpha;
  const double center = 2.0 * a * s / (a + 1.0);
  const double r2 = -a * s * s * sq(a - 1.0) / sq(a + 1.0) - cfg.h * cfg.h;
  return {center, r2};
}

}  // namespace

std::pair<double, double> critical_times(const AcquisitionConfig& cfg,
                                         double s) {
  require_pencil(cfg, "critical_times");
  require_not_midpoint(cfg, "critical_times");
  if (!(s > cfg.s0())) {
    throw UndefinedRegion("critical times are only defined for s > s0");
  }
  const double beta = cfg.beta();
  const double a = cfg.alpha;
  // |d| is the distance between the ellipse centers and the circle center;
  // taking the magnitude keeps t^- < t^+ for alpha in (-1, 0) as well.
  const double d = std::abs(s * sq(a - 1.0) / (2.0 * (a + 1.0)));
  const double r = std::sqrt(std::max(0.0, sigma2_center_r2(cfg, s).second));
  const double pre = 2.0 * (beta + 1.0);
  const double den = beta * beta + 1.0;
  return {pre * std::sqrt(d * (d - r) / den), pre * std::sqrt(d * (d + r) / den)};
}

std::pair<double, double> avoided_points(const AcquisitionConfig& cfg,
                                         double s) {
  require_pencil(cfg, "avoided_points");
  require_not_midpoint(cfg, "avoided_points");
  const auto [center, r2] = sigma2_center_r2(cfg, s);
  if (r2 < -1e-12 * cfg.h * cfg.h) {
    throw UndefinedRegion("avoided points are only defined for s >= s0");
  }
  const double r = std::sqrt(std::max(0.0, r2));
  return {center - r, center + r};
}

}  // namespace bsar
