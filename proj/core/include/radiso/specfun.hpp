#pragma once

// Special functions and dimensional constants.

namespace radiso {

// Surface measure of the unit sphere (boundary measure of the unit ball) and
// volume of the unit ball in R^n.
struct DimConstants {
  int n = 0;
  double surface = 0.0;  // A_n = 2 pi^{n/2} / Gamma(n/2)
  double volume = 0.0;   // V_n = A_n / n
};

DimConstants sphere_constants(int n);

// ln A_n, valid for real n > 0 (used for very large sphere dimensions).
double log_sphere_surface(double n);

// Standard normal density, distribution function G and its inverse.
double gauss_pdf(double r);
double gauss_cdf(double r);
// 1 - G(r) without cancellation.
double gauss_sf(double r);
// Throws DomainError unless 0 < a < 1.
double gauss_quantile(double a);

// Regularized lower incomplete gamma P(shape, x) and its complement Q.
// Throw DomainError for shape <= 0 or x < 0 (x may be +inf).
double reg_inc_gamma(double shape, double x);
double reg_inc_gamma_upper(double shape, double x);
// Inverses in x: P(shape, x) = p, Q(shape, x) = q.
double inv_reg_inc_gamma(double shape, double p);
double inv_reg_inc_gamma_upper(double shape, double q);

double beta_function(double a, double b);

// gamma_n[B_t(0)], the standard Gaussian mass of the centered ball of radius t.
double gaussian_ball_mass(int n, double t);
// 1 - gaussian_ball_mass(n, t).
double gaussian_ball_tail(int n, double t);

// int_r^inf exp(-s^2/2) s^{n-1} ds by adaptive quadrature.
double gaussian_tail_integral(double r, int n);

// Whether lambda e^{-r^2/2} r^{n-2} <= int_r^inf e^{-s^2/2} s^{n-1} ds
// <= e^{-r^2/2} r^{n-2} / lambda holds at r. Throws DomainError for r <= 0.
bool gaussian_tail_check(double r, int n, double lambda);

}  // namespace radiso
