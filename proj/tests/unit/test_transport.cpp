#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radiso/errors.hpp"
#include "radiso/specfun.hpp"
#include "radiso/transport.hpp"

using namespace radiso;
using doctest::Approx;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<std::pair<RadialDensity, int>> lipschitz_cases() {
  return {{RadialDensity::gaussian(), 1},          {RadialDensity::gaussian(), 3},
          {RadialDensity::scaled_gaussian(2.0), 2}, {RadialDensity::exp_power(3.0), 1},
          {RadialDensity::exp_power(3.0), 2},       {RadialDensity::exp_power(4.0), 3}};
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("Gaussian maps to the identity") {
    for (int n = 1; n <= 3; ++n) {
      RadialMeasure m(RadialDensity::gaussian(), n);
      const auto map = TransportMap::build(m);
      const auto r = map.grid_radii();
      const auto s = map.grid_sigma();
      for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(s[i] - r[i]) <= 1e-9 * (1.0 + r[i]));
      CHECK(map.lipschitz_constant() == Approx(1.0).epsilon(1e-9));
      CHECK(map.rho(0.0) == Approx(1.0).epsilon(1e-9));
      CHECK(map.rho(2.5) == Approx(1.0).epsilon(1e-12));
      const auto spec = map.jacobian_spectrum(1.3);
      CHECK(spec.radial == Approx(1.0).epsilon(1e-10));
      CHECK(spec.tangential == Approx(1.0).epsilon(1e-10));
      CHECK(spec.tangential_multiplicity == n - 1);
      const std::vector<double> x(n, 0.7);
      const auto y = map.apply(x);
      for (int k = 0; k < n; ++k) CHECK(y[k] == Approx(0.7).epsilon(1e-12));
    }
  }

  TEST_CASE("scaled Gaussian c = 2 is the linear map 2 id") {
    RadialMeasure m1(RadialDensity::scaled_gaussian(2.0), 1);
    const auto map1 = TransportMap::build(m1);
    const auto r = map1.grid_radii();
    const auto s = map1.grid_sigma();
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(s[i] - r[i] / 2.0) <= 1e-8 * (1.0 + r[i]));
    CHECK(map1.lipschitz_constant() == Approx(2.0).epsilon(1e-9));

    RadialMeasure m2(RadialDensity::scaled_gaussian(2.0), 2);
    const auto map2 = TransportMap::build(m2);
    const auto y = map2.apply(std::vector<double>{1.0, 0.0});
    CHECK(y[0] == Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(y[1]) == 0.0);
    const auto z = map2.apply_sigma(std::vector<double>{2.0, 0.0});
    CHECK(z[0] == Approx(1.0).epsilon(1e-10));
    const auto spec = map2.jacobian_spectrum(0.8);
    CHECK(spec.radial == Approx(2.0).epsilon(1e-9));
    CHECK(spec.tangential == Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("origin and boundary behaviour") {
    RadialMeasure m(RadialDensity::exp_power(3.0), 2);
    const auto map = TransportMap::build(m);
    const auto y = map.apply(std::vector<double>{0.0, 0.0});
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
    CHECK(map.sigma(1e-8) < 1e-7);
    CHECK(map.sigma(1e-4) < map.sigma(1e-3));
    CHECK_THROWS_AS(map.jacobian_spectrum(0.0), OutOfRangeError);
    CHECK_THROWS_AS(map.apply(std::vector<double>{1.0}), DimensionMismatchError);

    // The shell 1 < |x| < 2 is the whole image; Sigma vanishes inside the hole.
    RadialMeasure shell(RadialDensity::indicator(1.0, 2.0), 2);
    const auto smap = TransportMap::build(shell);
    const auto inside = smap.apply_sigma(std::vector<double>{0.5, 0.0});
    CHECK(inside[0] == 0.0);
    CHECK(inside[1] == 0.0);
    CHECK(smap.lipschitz().unbounded);
    CHECK(smap.lipschitz().reason == "inner-radius");
    CHECK(smap.inverse(1e-6) > 1.0);
  }

  TEST_CASE("inverse identity, Sigma round trip and ball-mass matching") {
    for (const auto& [d, n] : lipschitz_cases()) {
      CAPTURE(d.name());
      CAPTURE(n);
      RadialMeasure m(d, n);
      const auto map = TransportMap::build(m);
      const auto r = map.grid_radii();
      const auto s = map.grid_sigma();
      for (std::size_t i = 0; i < r.size(); i += 7) {
        CHECK(std::abs(map.inverse(s[i]) - r[i]) <= 1e-8 * (1.0 + r[i]));
        const double lower = std::min(m.cdf(r[i]), m.tail(r[i]));
        const double g = m.cdf(r[i]) <= 0.5 ? gaussian_ball_mass(n, s[i]) : gaussian_ball_tail(n, s[i]);
        CHECK(std::abs(g - lower) <= 1e-9 * std::max(lower, 1e-3));
      }
      std::mt19937_64 rng(3);
      std::normal_distribution<double> z;
      for (int k = 0; k < 50; ++k) {
        std::vector<double> x(n);
        for (auto& v : x) v = 2.0 * z(rng);
        const auto back = map.apply_sigma(map.apply(x));
        for (int j = 0; j < n; ++j) CHECK(std::abs(back[j] - x[j]) <= 1e-8 * (1.0 + norm(x)));
      }
    }
  }

  TEST_CASE("sigma' matches finite differences of sigma") {
    for (const auto& [d, n] : lipschitz_cases()) {
      CAPTURE(d.name());
      RadialMeasure m(d, n);
      const auto map = TransportMap::build(m);
      const auto r = map.grid_radii();
      for (std::size_t i = 64; i + 64 < r.size(); i += 61) {
        const double h = 1e-5 * r[i];
        const double fd = oracle::central_diff([&](double t) { return map.sigma(t); }, r[i], h);
        CHECK(map.sigma_prime(r[i]) == Approx(fd).epsilon(1e-4));
        CHECK(map.grid_sigma_prime()[i] == Approx(map.sigma_prime(r[i])).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("finite-difference Jacobian has the predicted spectrum") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    for (const auto& [d, n] : lipschitz_cases()) {
      if (n < 2) continue;
      CAPTURE(d.name());
      RadialMeasure m(d, n);
      const auto map = TransportMap::build(m);
      for (int k = 0; k < 50; ++k) {
        std::vector<double> x(n);
        for (auto& v : x) v = 1.5 * z(rng);
        const double t = norm(x);
        const double h = 1e-6 * (1.0 + t);
        // Columns J e_j by central differences.
        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (int j = 0; j < n; ++j) {
          auto xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          const auto yp = map.apply(xp), ym = map.apply(xm);
          for (int i = 0; i < n; ++i) J[i][j] = (yp[i] - ym[i]) / (2.0 * h);
        }
        const auto spec = map.jacobian_spectrum(t);
        // Radial direction is an eigenvector with eigenvalue s_1'(t) ...
        for (int i = 0; i < n; ++i) {
          double jx = 0.0;
          for (int j = 0; j < n; ++j) jx += J[i][j] * x[j] / t;
          CHECK(std::abs(jx - spec.radial * x[i] / t) <= 1e-3);
        }
        // ... and any orthogonal direction has eigenvalue rho(t).
        std::vector<double> v(n, 0.0);
        v[0] = -x[1];
        v[1] = x[0];
        const double vn = norm(v);
        for (int i = 0; i < n; ++i) {
          double jv = 0.0;
          for (int j = 0; j < n; ++j) jv += J[i][j] * v[j] / vn;
          CHECK(std::abs(jv - spec.tangential * v[i] / vn) <= 1e-3);
        }
      }
    }
  }

  TEST_CASE("Lipschitz certificate on random pairs") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z;
    for (const auto& [d, n] : lipschitz_cases()) {
      RadialMeasure m(d, n);
      const auto map = TransportMap::build(m);
      const double L = map.lipschitz_constant();
      REQUIRE(std::isfinite(L));
      double worst = 0.0;
      for (int k = 0; k < 10000; ++k) {
        std::vector<double> x(n), y(n);
        for (int j = 0; j < n; ++j) {
          x[j] = 2.0 * z(rng);
          y[j] = x[j] + (k % 2 ? 0.01 : 1.0) * z(rng);
        }
        const auto sx = map.apply(x), sy = map.apply(y);
        std::vector<double> dxv(n), dsv(n);
        for (int j = 0; j < n; ++j) {
          dxv[j] = x[j] - y[j];
          dsv[j] = sx[j] - sy[j];
        }
        worst = std::max(worst, norm(dsv) / norm(dxv));
      }
      CHECK(worst <= L + 1e-6);
    }
  }

  TEST_CASE("Lipschitz dichotomy for exp(-r^p/p)") {
    for (int n = 1; n <= 3; ++n) {
      for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        CAPTURE(n);
        CAPTURE(p);
        RadialMeasure m(RadialDensity::exp_power(p), n);
        const auto map = TransportMap::build(m);
        CHECK(std::isfinite(map.lipschitz_constant()) == (p >= 2.0));
        CHECK(map.lipschitz().unbounded == (p < 2.0));
      }
    }
  }

  TEST_CASE("disconnected support is rejected") {
    RadialMeasure m(RadialDensity::from_csv(std::string(RADISO_TEST_DATA_DIR) + "/disconnected.csv"), 1);
    try {
      (void)TransportMap::build(m);
      FAIL("expected DisconnectedSupportError");
    } catch (const DisconnectedSupportError& e) {
      CHECK(e.gap_radius() > 1.1);
      CHECK(e.gap_radius() < 1.7);
    }
  }

  TEST_CASE("option validation") {
    RadialMeasure m(RadialDensity::gaussian(), 1);
    TransportOptions o;
    o.nodes = 4;
    CHECK_THROWS_AS(TransportMap::build(m, o), DomainError);
    o = {};
    o.cdf_floor = 0.5;
    CHECK_THROWS_AS(TransportMap::build(m, o), DomainError);
  }

  TEST_CASE("CSV export") {
    RadialMeasure m(RadialDensity::gaussian(), 2);
    TransportOptions o;
    o.nodes = 64;
    const auto map = TransportMap::build(m, o);
    const auto path = std::filesystem::temp_directory_path() / "radiso_transport.csv";
    map.write_csv(path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,sigma,sigma_prime,rho");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == static_cast<int>(map.grid_radii().size()));
    std::filesystem::remove(path);
  }
}
