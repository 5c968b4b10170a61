#pragma once

// Quadrature and bracketed root finding shared by all modules.

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace radiso::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct QuadratureOptions {
  // Relative to the L1 norm of the integrand over [a, b].
  double rel_tol = 1e-12;
  unsigned max_depth = 10;
};

// Adaptive 15-point Gauss-Kronrod on [a, b]; either bound may be infinite.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {},
                 double* error = nullptr) {
  if (a == b) {
    if (error) *error = 0.0;
    return 0.0;
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  double l1 = 0.0;
  if (std::isinf(a) || std::isinf(b)) {
    const double value = GK::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
    if (error) *error = err;
    return value;
  }
  // Boost compares the unscaled local error with a scaled tolerance, which
  // never converges on short intervals; integrate over [-1, 1] instead.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&](double x) { return f(mid + half * x); };
  const double value = half * GK::integrate(g, -1.0, 1.0, opt.max_depth, opt.rel_tol, &err, &l1);
  if (error) *error = std::abs(half) * err;
  return value;
}

// Solves g(x) = 0 for g nondecreasing on [lo, hi] with g(lo) <= 0 <= g(hi).
// Newton steps from `guess` using dg, falling back to bisection whenever a
// step leaves the current bracket.
template <class G, class DG>
double solve_increasing(G&& g, DG&& dg, double lo, double hi, double guess,
                        double rel_tol = 1e-15, int max_iter = 300) {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double width_tol = rel_tol * std::max(std::abs(lo), std::abs(hi));
    if (hi - lo <= width_tol || hi - lo <= std::numeric_limits<double>::denorm_min()) {
      return 0.5 * (lo + hi);
    }
    const double d = dg(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - gx / d : kNaN;
    if (!(next > lo && next < hi)) {
      // Geometric bisection when the bracket spans many orders of magnitude.
      next = (lo > 0.0 && hi > 16.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    } else if (std::abs(next - x) <= rel_tol * std::abs(x)) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace radiso::numeric
