#include "radiso/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "radiso/errors.hpp"
#include "radiso/numeric.hpp"

namespace radiso {

namespace {

void require_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("incomplete gamma: shape must be positive, got " + std::to_string(shape));
  }
}

}  // namespace

DimConstants sphere_constants(int n) {
  if (n < 1) throw DomainError("sphere_constants: dimension must be >= 1");
  DimConstants c;
  c.n = n;
  c.surface = std::exp(log_sphere_surface(n));
  c.volume = c.surface / n;
  return c;
}

double log_sphere_surface(double n) {
  if (!(n > 0.0)) throw DomainError("log_sphere_surface: dimension must be positive");
  return std::log(2.0) + 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n);
}

double gauss_pdf(double r) { return std::exp(-0.5 * r * r) / std::sqrt(2.0 * std::numbers::pi); }

double gauss_cdf(double r) { return 0.5 * std::erfc(-r / std::numbers::sqrt2); }

double gauss_sf(double r) { return 0.5 * std::erfc(r / std::numbers::sqrt2); }

double gauss_quantile(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("gauss_quantile: probability must lie in (0,1), got " + std::to_string(a));
  }
  if (a < 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * a);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - a));
}

double reg_inc_gamma(double shape, double x) {
  require_shape(shape);
  if (!(x >= 0.0)) throw DomainError("reg_inc_gamma: x must be nonnegative");
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(shape, x);
}

double reg_inc_gamma_upper(double shape, double x) {
  require_shape(shape);
  if (!(x >= 0.0)) throw DomainError("reg_inc_gamma_upper: x must be nonnegative");
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(shape, x);
}

double inv_reg_inc_gamma(double shape, double p) {
  require_shape(shape);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("inv_reg_inc_gamma: p must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return numeric::kInf;
  return boost::math::gamma_p_inv(shape, p);
}

double inv_reg_inc_gamma_upper(double shape, double q) {
  require_shape(shape);
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("inv_reg_inc_gamma_upper: q must lie in [0,1]");
  if (q == 1.0) return 0.0;
  if (q == 0.0) return numeric::kInf;
  return boost::math::gamma_q_inv(shape, q);
}

double beta_function(double a, double b) { return boost::math::beta(a, b); }

double gaussian_ball_mass(int n, double t) {
  if (t <= 0.0) return 0.0;
  return reg_inc_gamma(0.5 * n, 0.5 * t * t);
}

double gaussian_ball_tail(int n, double t) {
  if (t <= 0.0) return 1.0;
  return reg_inc_gamma_upper(0.5 * n, 0.5 * t * t);
}

double gaussian_tail_integral(double r, int n) {
  if (n < 1) throw DomainError("gaussian_tail_integral: dimension must be >= 1");
  const auto integrand = [n](double s) {
    if (s <= 0.0) return n == 1 ? std::exp(-0.5 * s * s) : 0.0;
    return std::exp(-0.5 * s * s + (n - 1) * std::log(s));
  };
  // Split at the mode so the adaptive rule sees the peak.
  const double mode = std::sqrt(static_cast<double>(n - 1));
  if (r < mode) {
    return numeric::integrate(integrand, r, mode) + numeric::integrate(integrand, mode, numeric::kInf);
  }
  return numeric::integrate(integrand, r, numeric::kInf);
}

bool gaussian_tail_check(double r, int n, double lambda) {
  if (!(r > 0.0)) throw DomainError("gaussian_tail_check: r must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("gaussian_tail_check: lambda must lie in (0,1)");
  const double tail = gaussian_tail_integral(r, n);
  const double envelope = std::exp(-0.5 * r * r + (n - 2) * std::log(r));
  return lambda * envelope <= tail && tail <= envelope / lambda;
}

}  // namespace radiso
