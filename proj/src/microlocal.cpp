#include "bsar/microlocal.hpp"

#include <algorithm>
#include <cmath>

#include "bsar/error.hpp"

namespace bsar {

namespace {

double sq(double v) { return v * v; }

using Vec4 = Eigen::Vector4d;

// (x1, x2, s, omega) -> (s, t, sigma, -omega)
Vec4 pi_left(const AcquisitionConfig& cfg, const Vec4& q) {
  const double x1 = q(0), s = q(2), w = q(3);
  const auto r = bistatic_ranges(cfg, s, {x1, q(1)});
  const double sigma =
      -w * (cfg.alpha * (x1 - cfg.alpha * s) / r.A + (x1 - s) / r.B);
  return {s, r.A + r.B, sigma, -w};
}

// (x1, x2, s, omega) -> (x1, x2, xi1, xi2)
Vec4 pi_right(const AcquisitionConfig& cfg, const Vec4& q) {
  const double x1 = q(0), x2 = q(1), s = q(2), w = q(3);
  const auto r = bistatic_ranges(cfg, s, {x1, x2});
  return {x1, x2, w * ((x1 - cfg.alpha * s) / r.A + (x1 - s) / r.B),
          w * (x2 / r.A + x2 / r.B)};
}

Vec4 as_vec(const CanonicalPoint& p) { return {p.x1, p.x2, p.s, p.omega}; }

CanonicalPoint from_vec(const Vec4& q) { return {q(2), q(0), q(1), q(3)}; }

template <class Map>
Matrix4 central_jacobian(const Map& map, const Vec4& q, double rel_step) {
  Matrix4 J;
  for (int j = 0; j < 4; ++j) {
    const double h = rel_step * std::max(1.0, std::abs(q(j)));
    Vec4 qp = q, qm = q;
    qp(j) += h;
    qm(j) -= h;
    J.col(j) = (map(qp) - map(qm)) / (2.0 * h);
  }
  return J;
}

}  // namespace

std::pair<DataCovector, CovectorPoint> canonical_image(
    const AcquisitionConfig& cfg, const CanonicalPoint& p) {
  if (p.omega == 0.0) throw DomainError("canonical point needs omega != 0");
  const Point2 x = p.x();
  const auto r = bistatic_ranges(cfg, p.s, x);
  const double g1 = (x.x1 - cfg.alpha * p.s) / r.A + (x.x1 - p.s) / r.B;
  const double g2 = x.x2 / r.A + x.x2 / r.B;
  const double scale = std::abs(1.0 / r.A) + std::abs(1.0 / r.B);
  if (std::hypot(g1, g2) <= 1e-14 * scale) {
    throw DegenerateGeometry("scene covector vanishes at the between-point");
  }
  DataCovector d;
  d.s = p.s;
  d.t = r.A + r.B;
  d.sigma = -p.omega * (cfg.alpha * (x.x1 - cfg.alpha * p.s) / r.A + (x.x1 - p.s) / r.B);
  d.tau = p.omega;
  return {d, CovectorPoint{x, p.omega * g1, p.omega * g2}};
}

double sigma2_function(const AcquisitionConfig& cfg, double s, Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  return cfg.alpha / sq(r.A) + 1.0 / sq(r.B);
}

double transversal_factor(const AcquisitionConfig& cfg, double s, Point2 x) {
  const auto r = bistatic_ranges(cfg, s, x);
  const double dotp = (cfg.alpha * s - x.x1) * (s - x.x1) + sq(x.x2) + sq(cfg.h);
  return 1.0 + dotp / (r.A * r.B);
}

double det_dpiL(const AcquisitionConfig& cfg, const CanonicalPoint& p) {
  const Point2 x = p.x();
  return -p.omega * p.x2 * sigma2_function(cfg, p.s, x) *
         transversal_factor(cfg, p.s, x);
}

Matrix4 jacobian_piL(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                     double rel_step) {
  return central_jacobian([&](const Vec4& q) { return pi_left(cfg, q); },
                          as_vec(p), rel_step);
}

Matrix4 jacobian_piR(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                     double rel_step) {
  return central_jacobian([&](const Vec4& q) { return pi_right(cfg, q); },
                          as_vec(p), rel_step);
}

RankInfo rank_info(const Matrix4& m) {
  Eigen::JacobiSVD<Matrix4> svd(m, Eigen::ComputeFullV);
  RankInfo info;
  info.singular_values = svd.singularValues();
  info.kernel = svd.matrixV().col(3);
  return info;
}

SigmaClass classify_sigma(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                          double tol) {
  SigmaClass c;
  const bool on1 = std::abs(p.x2) < tol;
  bool on2 = false;
  if (cfg.alpha < 0.0) {
    const auto r = bistatic_ranges(cfg, p.s, p.x());
    const double f = cfg.alpha / sq(r.A) + 1.0 / sq(r.B);
    const double scale = std::abs(cfg.alpha) / sq(r.A) + 1.0 / sq(r.B);
    on2 = std::abs(f) < tol * scale;
  }
  if (on1) {
    c.kind = SigmaKind::Sigma1;
    c.both = on2;
  } else if (on2) {
    c.kind = SigmaKind::Sigma2;
  }
  return c;
}

double fold_transversality(const AcquisitionConfig& cfg, const CanonicalPoint& p,
                           const DetFunction& det) {
  const Vec4 q = as_vec(p);
  const Vec4 v = rank_info(jacobian_piL(cfg, p)).kernel;
  const double h = 1e-6 * std::max(1.0, q.cwiseAbs().maxCoeff());
  return (det(cfg, from_vec(q + h * v)) - det(cfg, from_vec(q - h * v))) /
         (2.0 * h);
}

double blowdown_normal_component(const AcquisitionConfig& cfg,
                                 const CanonicalPoint& p) {
  const Vec4 v = rank_info(jacobian_piR(cfg, p)).kernel;
  return std::abs(v(1)) / v.norm();
}

CovectorPoint predict_c1(const CovectorPoint& q) {
  return {{q.x.x1, -q.x.x2}, q.xi1, -q.xi2};
}

CommonMidpointImages predict_common_midpoint(const AcquisitionConfig& cfg,
                                             const CovectorPoint& q) {
  if (!cfg.common_midpoint()) {
    throw ModeError("common-midpoint maps require alpha = -1");
  }
  return {{{-q.x.x1, q.x.x2}, -q.xi1, q.xi2},
          {{-q.x.x1, -q.x.x2}, -q.xi1, -q.xi2}};
}

namespace {

double isodoppler(double alpha, double c, double u) {
  return (c * u - 1.0) / (c - u) + alpha * (c * u + 1.0) / (c + u);
}

}  // namespace

double composition_bracket(double alpha, double rho, double phi,
                           double phi_prime) {
  const double c = std::cosh(rho);
  const double u = std::cos(phi);
  const double v = std::cos(phi_prime);
  return (alpha + 1.0) * (c * c + u * v) - (alpha - 1.0) * c * (u + v);
}

double composition_residual(double alpha, double rho, double phi,
                            double phi_prime) {
  const double c = std::cosh(rho);
  const double u = std::cos(phi);
  const double v = std::cos(phi_prime);
  const double lhs = (isodoppler(alpha, c, u) - isodoppler(alpha, c, v)) *
                     (c - u) * (c + u) * (c - v) * (c + v);
  return lhs / sq(std::sinh(rho)) -
         (u - v) * composition_bracket(alpha, rho, phi, phi_prime);
}

double composition_scale(double alpha, double rho, double phi, double phi_prime) {
  const double c = std::cosh(rho);
  const double u = std::cos(phi);
  const double v = std::cos(phi_prime);
  const double terms = std::abs(alpha + 1.0) * (c * c + std::abs(u * v)) +
                       std::abs(alpha - 1.0) * c * (std::abs(u) + std::abs(v));
  // the unsimplified form carries four denominators of size ~cosh rho
  const double lhs_terms = (1.0 + std::abs(alpha)) * sq(sq(c + 1.0)) / sq(std::sinh(rho));
  return std::max({1.0, 2.0 * terms, lhs_terms});
}

C2Partners predict_c2_partners(const AcquisitionConfig& cfg, double s, Point2 x) {
  if (!(cfg.alpha < 0.0)) {
    throw DomainError("C2 partners exist only for alpha < 0");
  }
  C2Partners out;
  const auto r = bistatic_ranges(cfg, s, x);
  out.k = cfg.beta() * r.B / r.A;
  out.t = r.A + r.B;
  out.on_axis = x.x2 == 0.0;
  const auto e = ground_ellipse(cfg, s, out.t);
  if (!e || e->degenerate) return out;
  const auto circ = circle_C(cfg, s, 1.0 / out.k);
  const double m = e->center_x1;
  const double ag2 = sq(e->ag);
  const double bg2 = sq(e->bg);

  std::vector<double> roots;
  if (circ.kind == PencilKind::empty) return out;
  if (circ.kind == PencilKind::vertical_line) {
    roots.push_back(circ.line_x1);
  } else {
    const double c = circ.center_x1;
    const double r2 = sq(circ.radius);
    const double qa = 1.0 / ag2 - 1.0 / bg2;
    const double qb = -2.0 * m / ag2 + 2.0 * c / bg2;
    const double qc = sq(m) / ag2 + (r2 - sq(c)) / bg2 - 1.0;
    const double lin_scale = std::abs(qb) * (std::abs(m) + e->ag + 1.0);
    if (std::abs(qa) * sq(std::abs(m) + e->ag + 1.0) <= 1e-14 * lin_scale) {
      roots.push_back(-qc / qb);
    } else {
      double disc = qb * qb - 4.0 * qa * qc;
      const double disc_scale = qb * qb + std::abs(4.0 * qa * qc);
      if (disc < 0.0 && disc > -1e-12 * disc_scale) disc = 0.0;
      if (disc >= 0.0) {
        const double sd = std::sqrt(disc);
        const double qq = -0.5 * (qb + std::copysign(sd, qb));
        if (qq != 0.0) {
          roots.push_back(qq / qa);
          roots.push_back(qc / qq);
        } else {
          roots.push_back(-qb / (2.0 * qa));
        }
      }
    }
  }

  const double slack = 1e-9 * (e->ag + std::abs(m) + 1.0);
  for (double y1 : roots) {
    if (y1 < m - e->ag - slack || y1 > m + e->ag + slack) continue;
    if (circ.kind == PencilKind::circle &&
        (y1 < circ.center_x1 - circ.radius - slack ||
         y1 > circ.center_x1 + circ.radius + slack)) {
      continue;
    }
    double y2sq = bg2 * (1.0 - sq(y1 - m) / ag2);
    if (y2sq < -1e-9 * bg2) continue;
    const double y2 = std::sqrt(std::max(0.0, y2sq));
    const Point2 up{y1, y2};
    auto seen = [&](Point2 p) {
      return std::any_of(out.points.begin(), out.points.end(), [&](Point2 q) {
        return std::hypot(p.x1 - q.x1, p.x2 - q.x2) <= slack;
      });
    };
    if (!seen(up)) out.points.push_back(up);
    if (y2 > slack && !seen({y1, -y2})) out.points.push_back({y1, -y2});
  }
  return out;
}

std::vector<PartnerSample> c2_partner_curve(const AcquisitionConfig& cfg,
                                            Point2 x, double s_lo, double s_hi,
                                            int n) {
  if (n < 2) throw DomainError("partner curve needs at least 2 samples");
  std::vector<PartnerSample> out;
  const double s0 = cfg.s0();
  for (int i = 0; i < n; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (n - 1);
    if (!(s > s0)) continue;
    for (const auto& y : predict_c2_partners(cfg, s, x).points) out.push_back({s, y});
  }
  return out;
}

}  // namespace bsar
