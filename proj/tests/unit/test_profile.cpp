#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radiso/errors.hpp"
#include "radiso/profile.hpp"
#include "radiso/specfun.hpp"

using namespace radiso;
using doctest::Approx;

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_SUITE("profile") {
  TEST_CASE("gaussian_profile") {
    CHECK(gaussian_profile(0.5) == Approx(kInvSqrt2Pi).epsilon(1e-15));
    CHECK(gaussian_profile(0.0) == 0.0);
    CHECK(gaussian_profile(1.0) == 0.0);
    CHECK(gaussian_profile(0.84134474606854295) == Approx(0.24197072451914335).epsilon(1e-12));
    CHECK(gaussian_profile(oracle::normal_cdf(1.0)) == Approx(oracle::normal_pdf(1.0)).epsilon(1e-12));
    for (double a = 0.001; a < 1.0; a += 0.001) {
      CHECK(std::abs(gaussian_profile(a) - gaussian_profile(1.0 - a)) <= 1e-12);
    }
    CHECK_THROWS_AS(gaussian_profile(-0.1), DomainError);
    CHECK_THROWS_AS(gaussian_profile(1.1), DomainError);
  }

  TEST_CASE("bound curve for Gaussians and scaled Gaussians") {
    for (int n = 1; n <= 3; ++n) {
      RadialMeasure m(RadialDensity::gaussian(), n);
      const auto map = TransportMap::build(m);
      const auto curve = bound_curve(map, 101, m.density());
      CHECK(curve.n == n);
      CHECK(curve.edge_case_half);
      CHECK_FALSE(curve.unbounded);
      REQUIRE(curve.a.size() == 101);
      CHECK(curve.a[50] == 0.5);
      CHECK(curve.bound[50] == Approx(0.3989423).epsilon(1e-6));
      CHECK(curve.certified[50]);
      CHECK(curve.bound.front() == 0.0);
      CHECK(curve.bound.back() == 0.0);
      for (std::size_t i = 0; i < curve.a.size(); ++i) {
        CHECK(std::abs(curve.bound[i] - gaussian_profile(curve.a[i])) <= 1e-9);
        CHECK(std::abs(curve.bound[i] - curve.bound[100 - i]) <= 1e-10);
        CHECK(curve.bound[i] <= curve.bound[50]);
      }
    }
    RadialMeasure c2(RadialDensity::scaled_gaussian(2.0), 1);
    const auto curve = bound_curve(TransportMap::build(c2), 11);
    for (std::size_t i = 0; i < curve.a.size(); ++i) {
      CHECK(curve.bound[i] == Approx(gaussian_profile(curve.a[i]) / 2.0).epsilon(1e-9));
    }
  }

  TEST_CASE("non-Lipschitz maps give an identically zero, flagged curve") {
    RadialMeasure m(RadialDensity::exp_power(1.0), 1);
    const auto curve = bound_curve(TransportMap::build(m), 21);
    CHECK(curve.unbounded);
    CHECK(std::isinf(curve.L));
    for (std::size_t i = 0; i < curve.a.size(); ++i) {
      CHECK(curve.bound[i] == 0.0);
      CHECK_FALSE(curve.certified[i]);
    }
    CHECK_THROWS_AS(bound_curve(TransportMap::build(m), 1), DomainError);
  }

  TEST_CASE("a = 1/2 is excluded when f vanishes at the origin") {
    const auto d = RadialDensity::from_function(
        "r exp(-r^2/2)", [](double r) { return r * std::exp(-r * r / 2); },
        [](double r) { return std::log(r) - r * r / 2; }, 0.0, kInf);
    RadialMeasure m(d, 2);
    const auto curve = bound_curve(TransportMap::build(m), 3, d);
    CHECK_FALSE(curve.edge_case_half);
    CHECK(curve.half_borderline);
    CHECK_FALSE(curve.certified[1]);
  }

  TEST_CASE("profile CSV") {
    RadialMeasure m(RadialDensity::gaussian(), 1);
    const auto curve = bound_curve(TransportMap::build(m), 5);
    const auto path = std::filesystem::temp_directory_path() / "radiso_profile.csv";
    write_profile_csv(path, curve);
    std::ifstream in(path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.rfind("a,bound,certified\n0,0,1\n0.25,", 0) == 0);
    const auto at = text.find("\n0.5,");
    REQUIRE(at != std::string::npos);
    const auto end = text.find(',', at + 5);
    CHECK(std::stod(text.substr(at + 5, end - at - 5)) == Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(text.compare(end, 3, ",1\n") == 0);
  }

  TEST_CASE("boundary measure examples") {
    RadialMeasure m(RadialDensity::gaussian(), 1);
    const std::vector<Interval> half{{-kInf, 0.0}};
    const auto h = boundary_measure_1d(m, half);
    CHECK(h.a == 0.5);
    CHECK(h.mu_plus == Approx(kInvSqrt2Pi).epsilon(1e-14));
    CHECK(h.mu_plus == Approx(gaussian_profile(h.a)).epsilon(1e-14));

    const auto e = boundary_measure_1d(m, std::vector<Interval>{});
    CHECK(e.a == 0.0);
    CHECK(e.mu_plus == 0.0);

    const std::vector<Interval> sym{{-1.0, 1.0}};
    const auto s = boundary_measure_1d(m, sym);
    CHECK(s.a == Approx(0.6826894921370859).epsilon(1e-13));
    CHECK(s.mu_plus == Approx(0.4839414490382867).epsilon(1e-13));
    CHECK(s.complement == Approx(1.0 - 0.6826894921370859).epsilon(1e-12));
    // I(0.6827) = 0.35634 (mpmath).
    CHECK(gaussian_profile(s.a) == Approx(0.35634295193987449).epsilon(1e-12));
    CHECK(s.mu_plus >= gaussian_profile(s.a));

    // Touching intervals merge; their shared endpoint is not a boundary point.
    const std::vector<Interval> split{{-1.0, 0.0}, {0.0, 1.0}};
    const auto t = boundary_measure_1d(m, split);
    CHECK(t.a == Approx(s.a).epsilon(1e-14));
    CHECK(t.mu_plus == Approx(s.mu_plus).epsilon(1e-14));

    // A point has zero mass and two-sided boundary.
    const std::vector<Interval> point{{0.3, 0.3}};
    const auto p = boundary_measure_1d(m, point);
    CHECK(p.a == 0.0);
    CHECK(p.mu_plus == Approx(2.0 * oracle::normal_pdf(0.3)).epsilon(1e-13));
  }

  TEST_CASE("boundary measure errors") {
    RadialMeasure m(RadialDensity::gaussian(), 1);
    const std::vector<Interval> overlap{{-1.0, 0.5}, {0.0, 1.0}};
    CHECK_THROWS_AS(boundary_measure_1d(m, overlap), OverlappingIntervalsError);
    const std::vector<Interval> reversed{{1.0, 0.0}};
    CHECK_THROWS_AS(boundary_measure_1d(m, reversed), DomainError);
    RadialMeasure unit(RadialDensity::indicator(0.0, 1.0), 1);
    const std::vector<Interval> outside{{0.5, 1.5}};
    CHECK_THROWS_AS(boundary_measure_1d(unit, outside), SupportError);
    const std::vector<Interval> edge{{-1.0, 0.0}};
    CHECK_THROWS_AS(boundary_measure_1d(unit, edge), SupportError);
    const std::vector<Interval> inside{{-0.5, 0.25}};
    const auto b = boundary_measure_1d(unit, inside);
    CHECK(b.a == Approx(0.375).epsilon(1e-14));
    CHECK(b.mu_plus == Approx(1.0).epsilon(1e-14));
    RadialMeasure m2(RadialDensity::gaussian(), 2);
    CHECK_THROWS_AS(boundary_measure_1d(m2, inside), DimensionMismatchError);
  }

  TEST_CASE("numeric collars agree with the density-sum formula") {
    RadialMeasure m(RadialDensity::exp_power(3.0), 1);
    const std::vector<std::vector<Interval>> sets{
        {{-1.0, 1.0}}, {{-kInf, -0.3}, {0.2, 0.9}}, {{-2.0, -1.0}, {0.0, 0.5}, {1.0, kInf}}};
    for (const auto& set : sets) {
      const auto exact = boundary_measure_1d(m, set);
      const auto num = boundary_measure_1d_numeric(m, set);
      CHECK(num.quotient[0] == Approx(exact.mu_plus).epsilon(1e-2));
      CHECK(num.quotient[2] == Approx(exact.mu_plus).epsilon(1e-4));
      CHECK(num.richardson == Approx(exact.mu_plus).epsilon(1e-7));
    }
  }

  TEST_CASE("relation between G'(sigma) sigma' and F'") {
    for (const auto& d : {RadialDensity::gaussian(), RadialDensity::scaled_gaussian(0.5),
                          RadialDensity::exp_power(3.0), RadialDensity::exp_power(1.0)}) {
      RadialMeasure m(d, 1);
      const auto map = TransportMap::build(m);
      const auto r = map.grid_radii();
      const auto s = map.grid_sigma();
      const auto sp = map.grid_sigma_prime();
      for (std::size_t i = 1; i + 1 < r.size(); i += 13) {
        // F'(r) = f(r) / M_1 on the positive half line.
        CHECK(oracle::normal_pdf(s[i]) * sp[i] == Approx(m.density_at(r[i])).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("bound audit") {
    RadialMeasure m(RadialDensity::gaussian(), 1);
    const auto map = TransportMap::build(m);
    const auto empty = bound_audit(m, map, 0, 1);
    CHECK(empty.trials == 0);
    CHECK(empty.violations == 0);
    CHECK(empty.witness.empty());

    const auto rep = bound_audit(m, map, 10000, 1);
    CHECK(rep.trials == 10000);
    CHECK(rep.violations == 0);
    CHECK(rep.min_slack >= -1e-9);
    CHECK(rep.min_slack_halfline <= 1e-6);
    CHECK_FALSE(rep.witness.empty());
    const auto again = bound_audit(m, map, 10000, 1);
    CHECK(again.min_slack == rep.min_slack);

    for (const auto& d : {RadialDensity::scaled_gaussian(0.5), RadialDensity::scaled_gaussian(2.0),
                          RadialDensity::exp_power(2.0), RadialDensity::exp_power(3.0),
                          RadialDensity::exp_power(4.0)}) {
      RadialMeasure md(d, 1);
      const auto r = bound_audit(md, TransportMap::build(md), 10000, 2);
      CHECK(r.violations == 0);
    }

    RadialMeasure e1(RadialDensity::exp_power(1.0), 1);
    CHECK_THROWS_AS(bound_audit(e1, TransportMap::build(e1), 10, 1), PreconditionError);
    RadialMeasure g2(RadialDensity::gaussian(), 2);
    CHECK_THROWS_AS(bound_audit(g2, TransportMap::build(g2), 10, 1), DimensionMismatchError);
  }

  TEST_CASE("ball and half-space audits in higher dimensions") {
    for (int n = 2; n <= 3; ++n) {
      for (const auto& d : {RadialDensity::gaussian(), RadialDensity::scaled_gaussian(2.0),
                            RadialDensity::exp_power(3.0)}) {
        RadialMeasure m(d, n);
        const auto map = TransportMap::build(m);
        const auto balls = ball_audit(m, map);
        const auto halves = halfspace_audit(m, map);
        CHECK(balls.violations == 0);
        CHECK(halves.violations == 0);
        CHECK(balls.trials > 32);
        CHECK(halves.trials > 32);
      }
      // Half-spaces are optimal for the Gaussian.
      RadialMeasure g(RadialDensity::gaussian(), n);
      CHECK(std::abs(halfspace_audit(g, TransportMap::build(g)).min_slack) <= 1e-9);
    }
  }

  TEST_CASE("marginal density") {
    RadialMeasure g3(RadialDensity::gaussian(), 3);
    for (double a : {0.0, 0.5, 1.0, 2.5}) {
      CHECK(marginal_density(g3, a) == Approx(oracle::normal_pdf(a)).epsilon(1e-10));
    }
    RadialMeasure p2(RadialDensity::exp_power(3.0), 2);
    const double total =
        2.0 * oracle::gauss_legendre([&](double a) { return marginal_density(p2, a); }, 0.0, 6.0, 64);
    CHECK(total == Approx(1.0).epsilon(1e-8));
  }
}
