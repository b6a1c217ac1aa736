#pragma once

// Closed-form acquisition geometry for two platforms flying along the x1
// axis at height h: transmitter at (alpha*s, 0, h), receiver at (s, 0, h).
// Units are chosen so the wave speed is 1; travel times carry length units.

#include <optional>
#include <utility>
#include <vector>

namespace bsar {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Physical setup of one bistatic acquisition.
struct AcquisitionConfig {
  double alpha = 0.0;  ///< transmitter/receiver speed ratio, != 1
  double h = 1.0;      ///< common flight height, > 0
  double s_min = 0.0;  ///< aperture (slow time) interval
  double s_max = 1.0;
  double t_min = 0.0;  ///< fast-time window used by the data mute
  double t_max = 0.0;
  double f_margin = 1e-3;     ///< relative margin of the near-threshold mute
  double window_taper = 0.05; ///< fractional roll-off of the (s,t) window

  /// Throws DomainError unless alpha != 1, h > 0, 0 < s_min < s_max and
  /// the time window is ordered.
  void validate() const;

  [[nodiscard]] bool common_midpoint() const { return alpha == -1.0; }

  /// sqrt(-alpha); DomainError for alpha >= 0.
  [[nodiscard]] double beta() const;

  /// Slow time above which the rank-drop circle is nonempty. Requires
  /// alpha < 0. Returned as a magnitude so that alpha in (-1, 0) is usable.
  [[nodiscard]] double s0() const;

  friend bool operator==(const AcquisitionConfig&, const AcquisitionConfig&) = default;
};

/// h(alpha+1) / (sqrt(-alpha)(alpha-1)), signed.
double s0_from_alpha(double alpha, double h);
/// h(beta^2-1) / (beta(beta^2+1)), signed.
double s0_from_beta(double beta, double h);

struct PlatformPositions {
  Vec3 transmitter;
  Vec3 receiver;
};

PlatformPositions platform_positions(const AcquisitionConfig& cfg, double s);

/// Transmitter range A and receiver range B from a ground point.
struct Ranges {
  double A = 0.0;
  double B = 0.0;

  [[nodiscard]] double sum() const { return A + B; }
};

Ranges bistatic_ranges(const AcquisitionConfig& cfg, double s, Point2 x);

/// Bistatic travel time R(s,x) = A + B.
inline double travel_time(const AcquisitionConfig& cfg, double s, Point2 x) {
  return bistatic_ranges(cfg, s, x).sum();
}

/// Smallest travel time reaching the ground, sqrt((alpha-1)^2 s^2 + 4h^2).
double ground_threshold(const AcquisitionConfig& cfg, double s);

/// The point on the ground midway between the two nadirs.
Point2 between_point(const AcquisitionConfig& cfg, double s);

/// Iso-range curve A + B = t on the ground plane. The curve is the section
/// of the prolate spheroid with foci at the platforms, so its foci are not
/// the platform nadirs.
struct GroundEllipse {
  double s = 0.0;
  double t = 0.0;
  double center_x1 = 0.0;  ///< (1+alpha) s / 2
  double focal_c = 0.0;    ///< |1-alpha| s / 2
  double a3 = 0.0;         ///< spheroid semi-axes
  double b3 = 0.0;
  double ag = 0.0;         ///< ground ellipse semi-axes along x1 / x2
  double bg = 0.0;
  bool degenerate = false; ///< t at the threshold: the single between-point

  [[nodiscard]] Point2 point_at(double theta) const;
  /// Ramanujan's second approximation; exact enough to size quadratures.
  [[nodiscard]] double circumference_estimate() const;
  /// Implicit form (x1-c)^2/ag^2 + x2^2/bg^2 - 1.
  [[nodiscard]] double implicit(Point2 x) const;
};

/// Relative band around the threshold reported as degenerate.
inline constexpr double kDegenerateTolerance = 1e-9;

/// Empty optional below the threshold.
std::optional<GroundEllipse> ground_ellipse(const AcquisitionConfig& cfg,
                                            double s, double t);

struct EllipseSample {
  Point2 x;
  double weight = 0.0;  ///< arc length carried by the sample
};

/// n points uniform in the angular parameter with periodic trapezoid
/// arc-length weights. Throws DegenerateGeometry for empty or degenerate
/// ellipses and DomainError for n < 8.
std::vector<EllipseSample> ellipse_points(const AcquisitionConfig& cfg,
                                          double s, double t, int n);

/// Prolate spheroidal coordinates of a ground point with respect to the two
/// platforms. phi is measured so that cos(phi) = (A - B)/(|1-alpha| s) for
/// every alpha, which keeps both ranges positive when alpha > 1.
struct ProlateCoords {
  double rho = 0.0;
  double phi = 0.0;
};

ProlateCoords prolate_from_ground(const AcquisitionConfig& cfg, double s,
                                  Point2 x);
Ranges ranges_from_prolate(const AcquisitionConfig& cfg, double s,
                           ProlateCoords pc);
/// Inverse of prolate_from_ground; the ground constraint fixes |x2|, the
/// sign is taken from `upper`. Throws DegenerateGeometry when the
/// coordinates do not reach the ground.
Point2 ground_from_prolate(const AcquisitionConfig& cfg, double s,
                           ProlateCoords pc, bool upper = true);

// ---------------------------------------------------------------------------
// Circle pencil of the ratio beta*B/A (alpha < 0).

enum class PencilKind { circle, vertical_line, empty };

struct CirclePencilElement {
  double s = 0.0;
  double k = 0.0;
  PencilKind kind = PencilKind::empty;
  double center_x1 = 0.0;  ///< circle kind
  double radius = 0.0;     ///< circle kind; 0 for the others
  double line_x1 = 0.0;    ///< vertical_line kind

  [[nodiscard]] bool contains_points() const { return kind != PencilKind::empty; }
};

/// beta * B(s,x) / A(s,x).
double pencil_ratio(const AcquisitionConfig& cfg, double s, Point2 x);

/// Signed r(s,k)^2 = beta^2 s^2 k^2 (beta^2+1)^2 / (beta^2-k^2)^2 - h^2.
double pencil_radius_squared(const AcquisitionConfig& cfg, double s, double k);

/// Level set beta*B/A = k.
CirclePencilElement circle_C(const AcquisitionConfig& cfg, double s, double k);

/// The rank-drop circle alpha/A^2 + 1/B^2 = 0, i.e. circle_C(s, 1).
CirclePencilElement sigma2_circle(const AcquisitionConfig& cfg, double s);

/// k0(s) with r(s,k0) = 0; UndefinedRegion for s <= s0.
double k0(const AcquisitionConfig& cfg, double s);

/// x1-axis crossings (center -/+ radius) of C(s,k) for k in (k0(s), beta).
std::pair<double, double> circle_endpoints(const AcquisitionConfig& cfg,
                                           double s, double k);

/// t^- < t^+: smallest and largest travel times of ellipses meeting the
/// rank-drop circle. UndefinedRegion for s < s0.
std::pair<double, double> critical_times(const AcquisitionConfig& cfg,
                                         double s);

/// x1^- <= x1^+: intersections of the rank-drop circle with the x1 axis.
std::pair<double, double> avoided_points(const AcquisitionConfig& cfg,
                                         double s);

}  // namespace bsar
