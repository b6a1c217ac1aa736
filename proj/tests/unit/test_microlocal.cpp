#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bsar/cutoffs.hpp"
#include "bsar/error.hpp"
#include "bsar/microlocal.hpp"
#include "oracles.hpp"

using namespace bsar;

namespace {

AcquisitionConfig make(double alpha, double h = 1.0) {
  AcquisitionConfig c;
  c.alpha = alpha;
  c.h = h;
  c.s_min = 0.1;
  c.s_max = 3.0;
  return c;
}

Point2 on_sigma2(const AcquisitionConfig& c, double s, double theta) {
  const auto sig = sigma2_circle(c, s);
  return {sig.center_x1 + sig.radius * std::cos(theta), sig.radius * std::sin(theta)};
}

// partners found by a 2-D root search on the two level sets
std::vector<Point2> partners_by_search(const AcquisitionConfig& c, double s, Point2 x) {
  const auto r = bistatic_ranges(c, s, x);
  const double t = r.A + r.B;
  const double target = r.A / (c.beta() * r.B);
  auto F = [&](Point2 y) { return travel_time(c, s, y) - t; };
  auto G = [&](Point2 y) {
    const auto q = bistatic_ranges(c, s, y);
    return c.beta() * q.B / q.A - target;
  };
  const double reach = t;
  return oracle::intersect_2d(F, G, {-reach, -reach}, {reach, reach}, 800);
}

}  // namespace

TEST_CASE("canonical relation components") {
  const auto c = make(-4.0);
  const auto [d, q] = canonical_image(c, {1.0, 2.0, 1.0, 1.0});
  CHECK(d.t == doctest::Approx(std::sqrt(38.0) + std::sqrt(3.0)).epsilon(1e-14));
  CHECK(q.xi2 == doctest::Approx(1.0 / std::sqrt(38.0) + 1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(q.xi2 == doctest::Approx(0.739572).epsilon(1e-6));
  CHECK(d.tau == 1.0);
  const auto [d2, q2] = canonical_image(c, {1.3, 0.7, 0.0, -2.5});
  CHECK(q2.xi2 == 0.0);
  CHECK(d2.tau == -2.5);
  CHECK_THROWS_AS(canonical_image(c, {1.0, -1.5, 0.0, 1.0}), DegenerateGeometry);

  // xi is omega times grad_x R, sigma is omega dR/ds
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const CanonicalPoint p{1.2, u(rng), u(rng), 1.7};
    const auto [dd, qq] = canonical_image(c, p);
    const double h = 1e-6;
    const double g1 = (travel_time(c, p.s, {p.x1 + h, p.x2}) - travel_time(c, p.s, {p.x1 - h, p.x2})) / (2 * h);
    const double gs = (travel_time(c, p.s + h, p.x()) - travel_time(c, p.s - h, p.x())) / (2 * h);
    CHECK(qq.xi1 == doctest::Approx(p.omega * g1).epsilon(1e-7));
    CHECK(dd.sigma == doctest::Approx(p.omega * gs).epsilon(1e-7));
  }
}

TEST_CASE("closed-form determinant of the left projection") {
  const auto c = make(-4.0);
  CHECK(det_dpiL(c, {1.0, 3.0, 0.0, 1.0}) == 0.0);
  for (double th : {0.3, 1.0, 2.0, 2.8}) {
    const Point2 x = on_sigma2(c, 1.0, th);
    CHECK(std::abs(det_dpiL(c, {1.0, x.x1, x.x2, 1.0})) < 1e-10);
  }
  const auto p = make(2.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double x2 = u(rng);
    if (std::abs(x2) < 1e-3) continue;
    CHECK(det_dpiL(p, {1.0, u(rng), x2, 1.0}) != 0.0);
    CHECK(transversal_factor(c, 1.0, {u(rng), x2}) > 0.0);
  }
}

TEST_CASE("closed-form determinant matches the finite-difference Jacobian") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ua(-6.0, 4.0), us(0.2, 3.0), ux(-6.0, 6.0), uw(0.5, 3.0);
  int checked = 0;
  while (checked < 1000) {
    double alpha = ua(rng);
    if (std::abs(alpha - 1.0) < 0.1) continue;
    const auto c = make(alpha, 0.8);
    const CanonicalPoint p{us(rng), ux(rng), ux(rng), uw(rng) * (checked % 2 ? 1 : -1)};
    // stay away from Sigma and from the between-point
    if (std::abs(p.x2) < 0.1) continue;
    const double sig = sigma2_function(c, p.s, p.x());
    const auto r = bistatic_ranges(c, p.s, p.x());
    if (std::abs(sig) < 0.05 * (std::abs(alpha) / (r.A * r.A) + 1.0 / (r.B * r.B))) continue;
    const double fd = jacobian_piL(c, p).determinant();
    const double cf = det_dpiL(c, p);
    CHECK(std::abs(fd - cf) <= 1e-5 * std::abs(cf));
    ++checked;
  }
}

TEST_CASE("rank drops by one on both singular sets") {
  const auto c = make(-4.0);
  for (double x1 : {-3.0, 0.5, 4.0, 7.0}) {
    const auto info = rank_info(jacobian_piL(c, {1.0, x1, 0.0, 1.0}));
    CHECK(info.ratio() <= 1e-7);
    CHECK(info.singular_values(2) / info.singular_values(0) > 1e-4);
  }
  for (double th : {0.4, 1.2, 2.5}) {
    const Point2 x = on_sigma2(c, 1.0, th);
    const auto info = rank_info(jacobian_piL(c, {1.0, x.x1, x.x2, 1.0}));
    CHECK(info.ratio() <= 1e-7);
    CHECK(info.singular_values(2) / info.singular_values(0) > 1e-4);
  }
}

TEST_CASE("determinant changes sign across the rank-drop circle") {
  const auto c = make(-4.0);
  const auto sig = sigma2_circle(c, 1.0);
  for (double th : {0.5, 1.5, 2.5}) {
    const double ct = std::cos(th), st = std::sin(th);
    auto at = [&](double r) {
      return det_dpiL(c, {1.0, sig.center_x1 + r * ct, r * st, 1.0});
    };
    CHECK(at(0.95 * sig.radius) * at(1.05 * sig.radius) < 0.0);
  }
}

TEST_CASE("singular set classification") {
  for (double alpha : {-4.0, 2.0, 0.0}) {
    CHECK(classify_sigma(make(alpha), {1.0, 5.0, 0.0, 1.0}, 1e-8).kind == SigmaKind::Sigma1);
  }
  const auto c = make(-4.0);
  const Point2 x = on_sigma2(c, 1.0, std::numbers::pi / 4);
  CHECK(classify_sigma(c, {1.0, x.x1, x.x2, 1.0}, 1e-8).kind == SigmaKind::Sigma2);
  CHECK(classify_sigma(make(2.0), {1.0, 5.0, 3.0, 1.0}, 1e-8).kind == SigmaKind::none);
  const auto [xm, xp] = avoided_points(c, 1.0);
  const auto both = classify_sigma(c, {1.0, xp, 0.0, 1.0}, 1e-8);
  CHECK(both.kind == SigmaKind::Sigma1);
  CHECK(both.both);
  CHECK_FALSE(classify_sigma(c, {1.0, 3.0, 0.0, 1.0}, 1e-8).both);
  (void)xm;
}

TEST_CASE("fold transversality on the rank-drop circle") {
  const auto c = make(-4.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> us(0.5, 3.0), uth(0.1, std::numbers::pi - 0.1);
  for (int i = 0; i < 100; ++i) {
    const double s = us(rng);
    const Point2 x = on_sigma2(c, s, uth(rng));
    const CanonicalPoint p{s, x.x1, x.x2, 1.0};
    const auto r = bistatic_ranges(c, s, x);
    // scale of the derivative: |x2| times the gradient of the Sigma2 function
    const double scale = std::abs(x.x2) * (std::abs(c.alpha) / std::pow(r.A, 3) + 1.0 / std::pow(r.B, 3));
    CHECK(std::abs(fold_transversality(c, p)) > 1e-3 * scale);
  }
}

TEST_CASE("blowdown kernel is tangent to the flight-track set") {
  for (double alpha : {-4.0, 2.0, -0.5}) {
    const auto c = make(alpha);
    for (double x1 : {-2.0, 1.0, 6.0}) {
      const double s = 1.3;
      if (std::abs(x1 - 0.5 * (1.0 + alpha) * s) < 0.1) continue;
      CHECK(blowdown_normal_component(c, {s, x1, 0.0, 1.0}) <= 1e-8);
      const auto info = rank_info(jacobian_piR(c, {s, x1, 0.0, 1.0}));
      CHECK(info.ratio() <= 1e-7);
    }
  }
}

TEST_CASE("reflection artifact map") {
  const CovectorPoint q{{2.0, 3.0}, 1.0, 1.0};
  const auto r = predict_c1(q);
  CHECK(r == CovectorPoint{{2.0, -3.0}, 1.0, -1.0});
  CHECK(predict_c1(r) == q);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    CovectorPoint p{{u(rng), u(rng)}, u(rng), u(rng)};
    CHECK(predict_c1(predict_c1(p)) == p);
    CHECK_FALSE(predict_c1(p) == p);
    p.x.x2 = 0.0;
    p.xi2 = 0.0;
    CHECK(predict_c1(p) == p);
  }
}

TEST_CASE("common-midpoint artifact maps") {
  const auto c = make(-1.0);
  const CovectorPoint q{{2.0, 3.0}, 1.0, 1.0};
  const auto m = predict_common_midpoint(c, q);
  CHECK(m.lambda2 == CovectorPoint{{-2.0, 3.0}, -1.0, 1.0});
  CHECK(m.lambda3 == CovectorPoint{{-2.0, -3.0}, -1.0, -1.0});
  CHECK(predict_common_midpoint(c, predict_c1(q)).lambda2 == m.lambda3);
  CHECK(predict_c1(m.lambda2) == m.lambda3);
  CHECK(predict_common_midpoint(c, m.lambda2).lambda2 == q);
  CHECK(predict_common_midpoint(c, m.lambda3).lambda3 == q);
  CHECK_THROWS_AS(predict_common_midpoint(make(-4.0), q), ModeError);
  CHECK_THROWS_AS(predict_common_midpoint(make(2.0), q), ModeError);
}

TEST_CASE("composition factorization identity") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ua(-8.0, 8.0), ur(0.01, 4.0), up(0.001, std::numbers::pi - 0.001);
  for (int i = 0; i < 10000; ++i) {
    const double alpha = ua(rng), rho = ur(rng), phi = up(rng), phip = up(rng);
    const double res = composition_residual(alpha, rho, phi, phip);
    CHECK(std::abs(res) <= 1e-10 * composition_scale(alpha, rho, phi, phip));
  }
  CHECK(composition_residual(-4.0, 1.0, 0.7, 0.7) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(composition_bracket(-4.0, 1.0, 0.7, 0.7) != 0.0);
}

TEST_CASE("second factor has no zeros for nonnegative alpha") {
  // the factor is alpha (C-u)(C-v) + (C+u)(C+v) with C = cosh rho > 1 > |u|, |v|;
  // it only approaches zero as rho -> 0
  double worst = 1e300;
  for (double alpha : {0.0, 0.5, 2.0, 5.0}) {
    for (int i = 1; i < 60; ++i) {
      const double rho = 0.05 * i;
      for (int j = 1; j < 60; ++j) {
        for (int k = 1; k < 60; ++k) {
          const double phi = std::numbers::pi * j / 60.0, phip = std::numbers::pi * k / 60.0;
          const double b = composition_bracket(alpha, rho, phi, phip);
          CHECK(b > 0.0);
          if (rho >= 0.5) worst = std::min(worst, b / (alpha + 1.0));
        }
      }
    }
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("fold partners of a known point") {
  const auto c = make(-4.0);
  const auto r = predict_c2_partners(c, 1.0, {2.0, 1.0});
  CHECK(r.k == doctest::Approx(0.561951).epsilon(1e-6));
  REQUIRE(r.points.size() == 2);
  for (const auto& y : r.points) {
    CHECK(y.x1 == doctest::Approx(-1.1363).epsilon(1e-4));
    CHECK(std::abs(y.x2) == doctest::Approx(2.8738).epsilon(1e-4));
    CHECK(pencil_ratio(c, 1.0, y) == doctest::Approx(std::sqrt(19.0 / 6.0)).epsilon(1e-6));
    CHECK(travel_time(c, 1.0, y) == doctest::Approx(r.t).epsilon(1e-9));
  }
  const auto found = partners_by_search(c, 1.0, {2.0, 1.0});
  REQUIRE(found.size() == 2);
  for (const auto& f : found) {
    const bool match = std::any_of(r.points.begin(), r.points.end(), [&](Point2 y) {
      return std::hypot(y.x1 - f.x1, y.x2 - f.x2) < 1e-6;
    });
    CHECK(match);
  }
}

TEST_CASE("fold partners on the rank-drop circle are the point and its mirror") {
  const auto c = make(-4.0);
  const Point2 x = on_sigma2(c, 1.0, 1.0);
  const auto r = predict_c2_partners(c, 1.0, x);
  CHECK(r.k == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(r.points.size() == 2);
  for (const auto& y : r.points) {
    CHECK(y.x1 == doctest::Approx(x.x1).epsilon(1e-6));
    CHECK(std::abs(y.x2) == doctest::Approx(std::abs(x.x2)).epsilon(1e-6));
  }
}

TEST_CASE("no fold partners beyond the largest critical time") {
  const auto c = make(-4.0);
  const auto r = predict_c2_partners(c, 1.0, {6.0, 2.0});
  CHECK(r.t == doctest::Approx(std::sqrt(105.0) + std::sqrt(30.0)).epsilon(1e-12));
  CHECK(r.t > critical_times(c, 1.0).second);
  CHECK(r.points.empty());
  CHECK(partners_by_search(c, 1.0, {6.0, 2.0}).empty());
  CHECK_THROWS_AS(predict_c2_partners(make(2.0), 1.0, {1.0, 1.0}), DomainError);
}

TEST_CASE("fold partners agree with a 2-D root search") {
  const auto c = make(-4.0);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> us(0.5, 2.5), ux1(-2.0, 7.0), ux2(0.2, 3.0);
  for (int i = 0; i < 25; ++i) {
    const double s = us(rng);
    const Point2 x{ux1(rng), ux2(rng)};
    const auto r = predict_c2_partners(c, s, x);
    const auto found = partners_by_search(c, s, x);
    CHECK(found.size() == r.points.size());
    for (const auto& f : found) {
      const bool match = std::any_of(r.points.begin(), r.points.end(), [&](Point2 y) {
        return std::hypot(y.x1 - f.x1, y.x2 - f.x2) < 1e-5;
      });
      CHECK(match);
    }
  }
}

TEST_CASE("fold partner relation is symmetric") {
  const auto c = make(-4.0);
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> us(0.5, 2.5), ux1(-2.0, 7.0), ux2(0.2, 3.0);
  int tested = 0;
  for (int i = 0; i < 2000; ++i) {
    const double s = us(rng);
    const Point2 x{ux1(rng), ux2(rng)};
    for (const auto& y : predict_c2_partners(c, s, x).points) {
      ++tested;
      const auto back = predict_c2_partners(c, s, y).points;
      const bool found = std::any_of(back.begin(), back.end(), [&](Point2 z) {
        return std::hypot(z.x1 - x.x1, z.x2 - x.x2) < 1e-5;
      });
      CHECK(found);
    }
  }
  CHECK(tested > 100);
}

TEST_CASE("no fold partners outside the middle region") {
  auto c = make(-4.0);
  c.s_min = 0.05;
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> ux(-10.0, 10.0), us1(0.05, 0.29), us(0.35, 3.0);
  int n1 = 0, n3 = 0;
  while (n1 < 1000 || n3 < 1000) {
    const bool want_o1 = n1 < 1000;
    const double s = want_o1 ? us1(rng) : us(rng);
    const Point2 x{ux(rng), ux(rng)};
    const auto label = classify_region(c, s, travel_time(c, s, x));
    if (label == RegionLabel::O1 && want_o1) {
      ++n1;
      CHECK(predict_c2_partners(c, s, x).points.empty());
    } else if (label == RegionLabel::O3 && !want_o1) {
      ++n3;
      CHECK(predict_c2_partners(c, s, x).points.empty());
    }
  }
}

TEST_CASE("pencil ranges along ellipses in the first region exclude reciprocal pairs") {
  const auto c = make(-4.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> us(0.05, 0.29), uf(1.001, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double s = us(rng);
    const double t = ground_threshold(c, s) * uf(rng);
    double lo = 1e300, hi = 0.0;
    for (const auto& p : ellipse_points(c, s, t, 2048)) {
      const double k = pencil_ratio(c, s, p.x);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    for (int j = 1; j <= 200; ++j) {
      const double k = 0.01 + (1.0 - 0.01) * j / 200.0;
      const bool meets = k >= lo && k <= hi;
      const bool meets_inv = 1.0 / k >= lo && 1.0 / k <= hi;
      CHECK_FALSE((meets && meets_inv));
    }
  }
}

TEST_CASE("partner curve over the aperture") {
  const auto c = make(-4.0);
  const auto curve = c2_partner_curve(c, {2.0, 1.0}, 0.1, 3.0, 30);
  CHECK_FALSE(curve.empty());
  for (const auto& p : curve) {
    CHECK(p.s > c.s0());
    CHECK(travel_time(c, p.s, p.y) == doctest::Approx(travel_time(c, p.s, {2.0, 1.0})).epsilon(1e-9));
  }
  CHECK_THROWS_AS(c2_partner_curve(c, {2.0, 1.0}, 0.1, 3.0, 1), DomainError);
}
