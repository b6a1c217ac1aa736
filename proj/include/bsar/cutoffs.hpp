#pragma once

// Smooth mutes applied to the data and to the amplitude: the near-threshold
// mute f, the avoided-point mute g, the collars psi1/psi2 and the O1/O2/O3
// region mutes.

#include <optional>
#include <string>
#include <string_view>

#include "bsar/geometry.hpp"

namespace bsar {

/// C-infinity step: 1 for u <= lo, 0 for u >= hi, strictly decreasing
/// between. Built from exp(-1/x).
double bump(double u, double lo, double hi);

/// Collar parameters for the avoided-point mute.
struct EpsilonSelection {
  double s1 = 0.0;       ///< aperture start used for the selection, > s0
  double k1 = 0.0;       ///< pencil parameter in (k0(s1), 1)
  double epsilon = 0.0;  ///< collar width
  double beta = 0.0;

  /// r(s1,k1) > 12 eps and eps < min(beta-1, 1-k1, 1/4)/6.
  [[nodiscard]] bool satisfies_bounds(const AcquisitionConfig& cfg) const;
};

/// Picks (k1, eps) at s1 (default cfg.s_min). Requires alpha < -1; the
/// collars are not constructed for alpha in [-1, 0). Throws UndefinedRegion
/// when s1 <= s0.
EpsilonSelection select_epsilon(const AcquisitionConfig& cfg,
                                std::optional<double> s1 = std::nullopt);

/// Collar around the flight track: 1 for |x2| < eps, 0 for |x2| > 2 eps.
double psi1(const EpsilonSelection& sel, Point2 x);

/// Collar around the rank-drop circle in pencil coordinates:
/// 1 for |beta B/A - 1| < eps, 0 for |beta B/A - 1| > 2 eps.
double psi2(const AcquisitionConfig& cfg, const EpsilonSelection& sel,
            double s, Point2 x);

/// |x2| < m eps and |beta B/A - 1| < m eps.
bool in_D(const AcquisitionConfig& cfg, const EpsilonSelection& sel, double s,
          Point2 x, double multiple);

/// max(|x2|, |beta B/A - 1|) / eps; in_D(m) holds iff this is < m.
double collar_distance(const AcquisitionConfig& cfg,
                       const EpsilonSelection& sel, double s, Point2 x);

/// Smooth weight of u on [lo, hi] with fractional roll-off `taper` at each
/// end. Zero outside [lo, hi]. A zero taper gives the closed indicator.
double window_weight(double u, double lo, double hi, double taper);

/// Near-threshold mute times the smooth (s,t) window of the acquisition.
/// The time window is skipped when t_max <= t_min.
double mute_f(const AcquisitionConfig& cfg, double s, double t);

inline constexpr int kDefaultMuteSamples = 512;

/// Zero if the sampled ellipse E(s,t) meets D(s,4 eps), one if it misses
/// D(s,5 eps), smooth in the minimal collar distance in between.
/// Identically one when no selection is given (alpha >= -1).
double mute_g(const AcquisitionConfig& cfg,
              const std::optional<EpsilonSelection>& sel, double s, double t,
              int samples = kDefaultMuteSamples);

enum class Region { none, O1, O2, O3 };
enum class RegionLabel { O1, O2, O3, boundary };

std::string_view to_string(Region r);
std::string_view to_string(RegionLabel r);
/// Accepts none|o1|o2|o3 (case-insensitive); ConfigError otherwise.
Region parse_region(std::string_view text);

/// Relative band around s0 and t^-/t^+ reported as boundary.
inline constexpr double kRegionBand = 1e-6;

RegionLabel classify_region(const AcquisitionConfig& cfg, double s, double t);

/// Smooth mute supported in the named region intersected with the
/// acquisition window, equal to one on the middle 90% of each normalized
/// coordinate. Region::none returns 1. Requires a time window.
double region_mute(const AcquisitionConfig& cfg, Region which, double s,
                   double t);

}  // namespace bsar
