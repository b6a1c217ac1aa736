#include "bsar/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bsar/error.hpp"
#include "bsar/transform.hpp"

namespace bsar {

namespace {

double sq(double v) { return v * v; }

class Suite {
 public:
  Suite(std::string name, std::vector<CheckResult>& out) : name_(std::move(name)), out_(out) {}

  // passes when measured <= threshold
  void at_most(const std::string& check, double measured, double threshold,
               std::string detail = {}) {
    out_.push_back({name_, check, measured <= threshold, measured, threshold, std::move(detail)});
  }
  // passes when measured >= threshold
  void at_least(const std::string& check, double measured, double threshold,
                std::string detail = {}) {
    out_.push_back({name_, check, measured >= threshold, measured, threshold, std::move(detail)});
  }

 private:
  std::string name_;
  std::vector<CheckResult>& out_;
};

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// s inside the aperture where the pencil is nontrivial, for checks that need it.
double pencil_probe_s(const AcquisitionConfig& a) {
  return std::max(0.5 * (a.s_min + a.s_max), 1.5 * a.s0() + 1e-3);
}

// Golden-section refinement of the travel time along the rank-drop circle.
double refine_circle_extremum(const AcquisitionConfig& a, double s, double c,
                              double r, double theta, double width, bool maximize) {
  auto f = [&](double th) {
    const double v = travel_time(a, s, {c + r * std::cos(th), r * std::sin(th)});
    return maximize ? -v : v;
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = theta - width, hi = theta + width;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2);
    }
  }
  const double v = f(0.5 * (lo + hi));
  return maximize ? -v : v;
}

void geometry_suite(const RunConfig& rc, std::mt19937_64& rng,
                    std::vector<CheckResult>& out) {
  Suite suite("geometry", out);
  const auto& a = rc.acq;
  const auto& g = rc.grid;
  std::uniform_real_distribution<double> us(a.s_min, a.s_max);
  std::uniform_real_distribution<double> ux1(g.x1.lo, g.x1.hi);
  std::uniform_real_distribution<double> ux2(g.x2.lo, g.x2.hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = us(rng);
    const Point2 x{ux1(rng), ux2(rng)};
    const auto direct = bistatic_ranges(a, s, x);
    const auto back = ranges_from_prolate(a, s, prolate_from_ground(a, s, x));
    worst = std::max({worst, rel(back.A, direct.A), rel(back.B, direct.B)});
  }
  suite.at_most("prolate_roundtrip", worst, 1e-9);

  worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double s = us(rng);
    const double t = ground_threshold(a, s) * (1.05 + 2.0 * unit(rng));
    for (const auto& p : ellipse_points(a, s, t, 64)) {
      worst = std::max(worst, rel(travel_time(a, s, p.x), t));
    }
  }
  suite.at_most("ellipse_on_isorange", worst, 1e-9);

  {
    const double s = us(rng);
    const double t = 2.0 * ground_threshold(a, s);
    double w1 = 0.0, w2 = 0.0;
    for (const auto& p : ellipse_points(a, s, t, 1024)) w1 += p.weight;
    for (const auto& p : ellipse_points(a, s, t, 4096)) w2 += p.weight;
    suite.at_most("ellipse_weight_convergence", rel(w1, w2), 1e-4);
  }

  if (!(a.alpha < 0.0)) return;
  suite.at_most("s0_closed_forms",
                rel(s0_from_alpha(a.alpha, a.h), s0_from_beta(a.beta(), a.h)), 1e-12);
  if (a.common_midpoint()) return;

  {
    double lo = 0.0, hi = 1.0;
    while (pencil_radius_squared(a, hi, 1.0) <= 0.0) hi *= 2.0;
    while (hi - lo > 1e-15 * hi) {
      const double mid = 0.5 * (lo + hi);
      (pencil_radius_squared(a, mid, 1.0) > 0.0 ? hi : lo) = mid;
    }
    suite.at_most("s0_bisection", rel(0.5 * (lo + hi), a.s0()), 1e-10);
  }

  const double s = pencil_probe_s(a);
  const auto circle = sigma2_circle(a, s);
  const auto [tm, tp] = critical_times(a, s);
  {
    const int n = 100000;
    double best_lo = 1e300, best_hi = -1e300, th_lo = 0, th_hi = 0;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n;
      const double v = travel_time(a, s, {circle.center_x1 + circle.radius * std::cos(th),
                                          circle.radius * std::sin(th)});
      if (v < best_lo) { best_lo = v; th_lo = th; }
      if (v > best_hi) { best_hi = v; th_hi = th; }
    }
    const double w = 4.0 * std::numbers::pi / n;
    best_lo = refine_circle_extremum(a, s, circle.center_x1, circle.radius, th_lo, w, false);
    best_hi = refine_circle_extremum(a, s, circle.center_x1, circle.radius, th_hi, w, true);
    suite.at_most("critical_times_brute_force",
                  std::max(rel(tm, best_lo), rel(tp, best_hi)), 1e-7);
  }
  {
    const auto [xm, xp] = avoided_points(a, s);
    const double ta = travel_time(a, s, {xm, 0.0});
    const double tb = travel_time(a, s, {xp, 0.0});
    suite.at_most("avoided_point_times",
                  std::max(rel(std::min(ta, tb), tm), rel(std::max(ta, tb), tp)), 1e-9);
  }
  {
    const double lo = k0(a, s), hi = a.beta();
    double prev_l = 0, prev_r = 0;
    int violations = 0;
    for (int i = 1; i <= 100; ++i) {
      const double k = lo + (hi - lo) * i / 101.0;
      const auto [xl, xr] = circle_endpoints(a, s, k);
      if (i > 1 && !(xr > prev_r && xl < prev_l)) ++violations;
      prev_l = xl;
      prev_r = xr;
    }
    suite.at_most("pencil_monotone_violations", violations, 0);
  }
  {
    worst = 0.0;
    const double lo = k0(a, s), hi = a.beta();
    for (int i = 0; i < 200; ++i) {
      const double k = lo + (hi - lo) * (0.01 + 0.98 * unit(rng));
      const auto c = circle_C(a, s, k);
      const double th = 2.0 * std::numbers::pi * unit(rng);
      const Point2 x{c.center_x1 + c.radius * std::cos(th), c.radius * std::sin(th)};
      worst = std::max(worst, rel(pencil_ratio(a, s, x), k));
    }
    suite.at_most("circle_membership", worst, 1e-9);
  }
}

void operators_suite(const RunConfig& rc, std::mt19937_64& rng, int threads,
                     std::vector<CheckResult>& out) {
  Suite suite("operators", out);
  GridSpec g = rc.grid;
  g.x1.n = std::min(g.x1.n, 40);
  g.x2.n = std::min(g.x2.n, 40);
  g.s.n = std::min(g.s.n, 40);
  g.t.n = std::min(g.t.n, 80);
  OperatorOptions opts = rc.operator_options(threads);
  if (opts.region != Region::none && (!(rc.acq.alpha < 0.0) || rc.acq.common_midpoint())) {
    opts.region = Region::none;
  }
  const BistaticOperator op(rc.acq, rc.selection(), g, opts);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_image = [&] {
    Image v = Image::zeros(g);
    for (auto& x : v.values) x = normal(rng);
    return v;
  };
  auto random_data = [&] {
    Sinogram d = Sinogram::zeros(g);
    for (auto& x : d.values) x = normal(rng);
    return d;
  };

  {
    const Image v = random_image();
    const Sinogram d = random_data();
    const Sinogram fv = op.forward(v);
    const Image fd = op.adjoint(d);
    const double lhs = dot(fv.values, d.values) * g.data_cell();
    const double rhs = dot(v.values, fd.values) * g.cell_area();
    const double denom = norm2(fv.values) * norm2(d.values) * g.data_cell();
    suite.at_most("adjoint_pairing", std::abs(lhs - rhs) / std::max(denom, 1e-300), 1e-4);
  }
  {
    const Image v1 = random_image();
    const Image v2 = random_image();
    Image comb = Image::zeros(g);
    for (std::size_t i = 0; i < comb.values.size(); ++i) {
      comb.values[i] = 2.0 * v1.values[i] - 0.5 * v2.values[i];
    }
    const auto a = op.forward(v1), b = op.forward(v2), c = op.forward(comb);
    std::vector<double> diff(c.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = c.values[i] - 2.0 * a.values[i] + 0.5 * b.values[i];
    }
    suite.at_most("forward_linearity", norm2(diff) / std::max(norm2(c.values), 1e-300), 1e-12);

    std::size_t bad = 0;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (op.mutes()[i] == 0.0 && c.values[i] != 0.0) ++bad;
    }
    suite.at_most("muted_samples_nonzero", static_cast<double>(bad), 0.0);

    if (g.x2.lo == -g.x2.hi) {
      const auto m = op.forward(reflect_x2(v1));
      double worst = 0.0;
      for (std::size_t i = 0; i < m.values.size(); ++i) {
        worst = std::max(worst, std::abs(m.values[i] - a.values[i]));
      }
      double scale = 0.0;
      for (double x : a.values) scale = std::max(scale, std::abs(x));
      suite.at_most("mirror_equivariance", worst / std::max(scale, 1e-300), 1e-12);
    }
  }
}

void microlocal_suite(const RunConfig& rc, std::mt19937_64& rng,
                      const ValidationHooks& hooks, std::vector<CheckResult>& out) {
  Suite suite("microlocal", out);
  const auto& a = rc.acq;
  const auto& g = rc.grid;
  std::uniform_real_distribution<double> us(a.s_min, a.s_max);
  std::uniform_real_distribution<double> ux1(g.x1.lo, g.x1.hi);
  std::uniform_real_distribution<double> ux2(g.x2.lo, g.x2.hi);
  std::uniform_real_distribution<double> uw(0.5, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  {
    double worst = 0.0;
    int used = 0;
    while (used < 200) {
      const CanonicalPoint p{us(rng), ux1(rng), ux2(rng), uw(rng)};
      const auto r = bistatic_ranges(a, p.s, p.x());
      const double f2 = std::abs(sigma2_function(a, p.s, p.x())) /
                        (std::abs(a.alpha) / sq(r.A) + 1.0 / sq(r.B));
      if (std::abs(p.x2) < 0.05 || f2 < 1e-2) continue;
      const double fd = jacobian_piL(a, p).determinant();
      worst = std::max(worst, rel(hooks.det(a, p), fd));
      ++used;
    }
    suite.at_most("det_matches_jacobian", worst, 1e-5);
  }
  {
    double worst_det = 0.0, worst_rank = 0.0, worst_tan = 0.0;
    for (int i = 0; i < 50; ++i) {
      const CanonicalPoint p{us(rng), ux1(rng), 0.0, uw(rng)};
      if (std::abs(p.x1 - 0.5 * (1.0 + a.alpha) * p.s) < 1e-3) continue;
      const auto r = bistatic_ranges(a, p.s, p.x());
      const double scale = std::abs(p.omega) * (std::abs(a.alpha) / sq(r.A) + 1.0 / sq(r.B)) *
                           transversal_factor(a, p.s, p.x());
      worst_det = std::max(worst_det, std::abs(hooks.det(a, p)) / scale);
      worst_rank = std::max(worst_rank, rank_info(jacobian_piL(a, p)).ratio());
      worst_tan = std::max(worst_tan, blowdown_normal_component(a, p));
    }
    suite.at_most("det_zero_on_sigma1", worst_det, 1e-10);
    suite.at_most("rank3_on_sigma1", worst_rank, 1e-7);
    suite.at_most("blowdown_kernel_tangent_sigma1", worst_tan, 1e-8);
  }
  if (a.alpha < 0.0 && !a.common_midpoint()) {
    double worst_det = 0.0, worst_rank = 0.0, weakest_fold = 1e300;
    const double s = pencil_probe_s(a);
    const auto c = sigma2_circle(a, s);
    for (int i = 0; i < 100; ++i) {
      const double th = 0.1 + (std::numbers::pi - 0.2) * unit(rng);
      const CanonicalPoint p{s, c.center_x1 + c.radius * std::cos(th),
                             c.radius * std::sin(th), uw(rng)};
      const auto r = bistatic_ranges(a, p.s, p.x());
      const double scale = std::abs(p.omega * p.x2) *
                           (std::abs(a.alpha) / sq(r.A) + 1.0 / sq(r.B)) *
                           transversal_factor(a, p.s, p.x());
      worst_det = std::max(worst_det, std::abs(hooks.det(a, p)) / scale);
      worst_rank = std::max(worst_rank, rank_info(jacobian_piL(a, p)).ratio());
      weakest_fold = std::min(weakest_fold,
                              std::abs(fold_transversality(a, p, hooks.det)) / scale);
    }
    suite.at_most("det_zero_on_sigma2", worst_det, 1e-10);
    suite.at_most("rank3_on_sigma2", worst_rank, 1e-7);
    suite.at_least("fold_transversality_sigma2", weakest_fold, 1e-6);

    double worst_sym = 0.0;
    int tested = 0;
    for (int i = 0; i < 200 && tested < 100; ++i) {
      const double sp = std::max(a.s0() * (1.0 + 1e-3), us(rng));
      const Point2 x{ux1(rng), ux2(rng)};
      if (std::abs(x.x2) < 0.05) continue;
      const auto part = predict_c2_partners(a, sp, x);
      for (const auto& y : part.points) {
        const auto back = predict_c2_partners(a, sp, y);
        double best = 1e300;
        for (const auto& z : back.points) best = std::min(best, std::hypot(z.x1 - x.x1, z.x2 - x.x2));
        worst_sym = std::max(worst_sym, best);
        ++tested;
      }
    }
    suite.at_most("c2_partner_symmetry", worst_sym, 1e-5);
  }
  {
    std::uniform_real_distribution<double> ua(-5.0, 5.0);
    std::uniform_real_distribution<double> urho(0.05, 3.0);
    std::uniform_real_distribution<double> uphi(0.01, std::numbers::pi - 0.01);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double al = ua(rng);
      if (std::abs(std::abs(al) - 1.0) < 1e-3) al += 0.01;
      const double rho = urho(rng), phi = uphi(rng), phip = uphi(rng);
      worst = std::max(worst, std::abs(composition_residual(al, rho, phi, phip)) /
                                  composition_scale(al, rho, phi, phip));
    }
    suite.at_most("composition_identity", worst, 1e-10);
  }
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& cfg,
                                        const std::string& suite,
                                        const ValidationHooks& hooks,
                                        int threads) {
  if (suite != "geometry" && suite != "operators" && suite != "microlocal" &&
      suite != "all") {
    throw ConfigError("suite must be geometry, operators, microlocal or all");
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<CheckResult> out;
  if (suite == "geometry" || suite == "all") geometry_suite(cfg, rng, out);
  if (suite == "operators" || suite == "all") operators_suite(cfg, rng, threads, out);
  if (suite == "microlocal" || suite == "all") microlocal_suite(cfg, rng, hooks, out);
  return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  os.precision(6);
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.suite << "." << r.name
       << " measured=" << std::scientific << r.measured
       << " threshold=" << r.threshold << std::defaultfloat;
    if (!r.detail.empty()) os << " " << r.detail;
    os << "\n";
  }
  return os.str();
}

}  // namespace bsar
