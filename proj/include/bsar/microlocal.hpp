#pragma once

// Numeric diagnostics of the canonical relation of the forward operator,
// parameterized by (s, x1, x2, omega), and predictors for the artifacts of
// the normal operator.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bsar/geometry.hpp"

namespace bsar {

struct CanonicalPoint {
  double s = 1.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double omega = 1.0;

  [[nodiscard]] Point2 x() const { return {x1, x2}; }
};

struct CovectorPoint {
  Point2 x;
  double xi1 = 0.0;
  double xi2 = 0.0;

  friend bool operator==(const CovectorPoint&, const CovectorPoint&) = default;
};

struct DataCovector {
  double s = 0.0;
  double t = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
};

/// The data covector and scene covector of a canonical point. Throws
/// DegenerateGeometry at the between-point, where grad_x R vanishes.
std::pair<DataCovector, CovectorPoint> canonical_image(
    const AcquisitionConfig& cfg, const CanonicalPoint& p);

/// alpha/A^2 + 1/B^2.
double sigma2_function(const AcquisitionConfig& cfg, double s, Point2 x);

/// 1 + (gamma_T - x).(gamma_R - x) / (A B), positive for h > 0.
double transversal_factor(const AcquisitionConfig& cfg, double s, Point2 x);

/// -omega x2 (alpha/A^2 + 1/B^2)(1 + (gamma_T - x).(gamma_R - x)/(A B)).
double det_dpiL(const AcquisitionConfig& cfg, const CanonicalPoint& p);

using Matrix4 = Eigen::Matrix4d;

/// Central-difference Jacobian of pi_L = (s, t, sigma, -omega) with respect
/// to (x1, x2, s, omega). The last slot is -tau so that the determinant
/// carries the sign convention of det_dpiL.
Matrix4 jacobian_piL(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                     double rel_step = 1e-6);

/// Central-difference Jacobian of pi_R = (x1, x2, xi1, xi2) with respect
/// to (x1, x2, s, omega).
Matrix4 jacobian_piR(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                     double rel_step = 1e-6);

struct RankInfo {
  Eigen::Vector4d singular_values;  ///< descending
  Eigen::Vector4d kernel;           ///< right singular vector of the smallest
  [[nodiscard]] double ratio() const { return singular_values(3) / singular_values(0); }
};

RankInfo rank_info(const Matrix4& m);

enum class SigmaKind { none, Sigma1, Sigma2 };

struct SigmaClass {
  SigmaKind kind = SigmaKind::none;
  bool both = false;  ///< on Sigma1 and Sigma2 at once (the avoided points)
};

/// Sigma1 iff |x2| < tol; Sigma2 iff alpha < 0 and
/// |alpha/A^2 + 1/B^2| < tol (|alpha|/A^2 + 1/B^2).
SigmaClass classify_sigma(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                          double tol);

using DetFunction =
    std::function<double(const AcquisitionConfig&, const CanonicalPoint&)>;

/// Derivative of det along the kernel direction of d pi_L at p, in the
/// (x1, x2, s, omega) coordinates. Nonzero at a fold.
double fold_transversality(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                           const DetFunction& det = det_dpiL);

/// |x2 component| of the unit kernel of d pi_R at p. Zero where the kernel
/// is tangent to Sigma1.
double blowdown_normal_component(const AcquisitionConfig& cfg,
                                 const CanonicalPoint& p);

/// (x1, x2, xi1, xi2) -> (x1, -x2, xi1, -xi2).
CovectorPoint predict_c1(const CovectorPoint& q);

struct CommonMidpointImages {
  CovectorPoint lambda2;  ///< (-x1, x2, -xi1, xi2)
  CovectorPoint lambda3;  ///< (-x1, -x2, -xi1, -xi2)
};

/// ModeError unless alpha == -1.
CommonMidpointImages predict_common_midpoint(const AcquisitionConfig& cfg,
                                             const CovectorPoint& q);

/// (LHS / sinh^2 rho) - (u - v)[(alpha+1)(cosh^2 rho + u v)
/// - (alpha-1) cosh rho (u + v)] with u = cos phi, v = cos phi', where LHS
/// is the difference of the isodoppler expressions in prolate coordinates
/// multiplied by all four denominators. The sinh^2 rho factor cancels
/// exactly and is divided out.
double composition_residual(double alpha, double rho, double phi,
                            double phi_prime);

/// A magnitude for the terms entering composition_residual.
double composition_scale(double alpha, double rho, double phi, double phi_prime);

/// (alpha+1)(cosh^2 rho + u v) - (alpha-1) cosh rho (u + v).
double composition_bracket(double alpha, double rho, double phi,
                           double phi_prime);

struct C2Partners {
  double k = 0.0;  ///< beta B/A at x
  double t = 0.0;  ///< A + B at x
  bool on_axis = false;
  std::vector<Point2> points;
};

/// Ground points y with A(y)+B(y) = A(x)+B(x) and beta B(y)/A(y) = A(x)/(beta B(x)),
/// from the intersection of E(s,t) with C(s,1/k). Requires alpha < 0.
C2Partners predict_c2_partners(const AcquisitionConfig& cfg, double s, Point2 x);

struct PartnerSample {
  double s = 0.0;
  Point2 y;
};

/// Partners of x over n evenly spaced s in [s_lo, s_hi], skipping s <= s0.
std::vector<PartnerSample> c2_partner_curve(const AcquisitionConfig& cfg,
                                            Point2 x, double s_lo, double s_hi,
                                            int n);

}  // namespace bsar
