#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "radiso/radial.hpp"

namespace radiso {

struct TransportOptions {
  // Nodes of the CDF-domain grid, log-spaced in mass toward both ends.
  int nodes = 4096;
  // Smallest lower and upper mass resolved by the grid.
  double cdf_floor = 1e-10;
  // Grid sup of 1/sigma' above which L is reported as unbounded.
  double divergence_threshold = 1e8;
  // Minimum log-log slope of 1/sigma' over the last mass decade that counts as growth.
  double trend_slope = 0.05;
};

struct LipschitzEstimate {
  double value = 0.0;  // +inf when unbounded
  bool unbounded = false;
  // "inner-radius", "threshold", "upper-trend", "lower-trend" or "" when finite.
  std::string reason;
  double grid_sup = 0.0;
  double argmax_radius = 0.0;
  // Log-log slopes of 1/sigma' over the first and last mass decade.
  double lower_slope = 0.0;
  double upper_slope = 0.0;
};

struct JacobianSpectrum {
  double radial = 0.0;      // (s_1)'(t), multiplicity 1
  double tangential = 0.0;  // rho(t) = s_1(t) / t, multiplicity n - 1
  int radial_multiplicity = 1;
  int tangential_multiplicity = 0;
};

// The increasing map sigma on (r_f, R_f) with gamma_n[B_sigma(r)] = mu_n^f[B_r],
// its inverse s_1 and the radial map s_n(x) = rho(|x|) x.
//
// Point evaluations are exact up to quadrature tolerance; the grid only seeds
// Newton iterations and feeds the Lipschitz estimate and CSV export.
class TransportMap {
 public:
  // Throws DisconnectedSupportError when f vanishes on an interval inside its support.
  static TransportMap build(const RadialMeasure& measure, const TransportOptions& options = {});

  int dimension() const noexcept { return measure_.dimension(); }
  const RadialMeasure& measure() const noexcept { return measure_; }
  const TransportOptions& options() const noexcept { return options_; }

  double sigma(double r) const;
  // Closed form sigma'(r) = (2pi)^{n/2}/M f(r) e^{sigma^2/2} (r/sigma)^{n-1}.
  double sigma_prime(double r) const;
  // s_1 = sigma^{-1} on (0, inf); r_f at 0.
  double inverse(double t) const;
  // (s_1)'(t) = 1 / sigma'(s_1(t)).
  double inverse_derivative(double t) const;
  // s_1(t) / t, extended to t = 0 by the first grid node.
  double rho(double t) const;

  std::vector<double> apply(std::span<const double> x) const;
  // sigma(|y|) y / |y| on the image (r_f, R_f) of the map, 0 elsewhere.
  std::vector<double> apply_sigma(std::span<const double> y) const;

  // Throws OutOfRangeError for t <= 0 or where the map is not resolvable.
  JacobianSpectrum jacobian_spectrum(double t) const;

  const LipschitzEstimate& lipschitz() const noexcept { return lipschitz_; }
  double lipschitz_constant() const noexcept { return lipschitz_.value; }

  std::span<const double> grid_radii() const noexcept { return r_; }
  std::span<const double> grid_sigma() const noexcept { return sigma_; }
  std::span<const double> grid_sigma_prime() const noexcept { return sigma_prime_; }
  // Ball mass F_n at each node.
  std::span<const double> grid_mass() const noexcept { return mass_; }

  // Columns r,sigma,sigma_prime,rho with rho = r / sigma(r) at each node.
  void write_csv(const std::filesystem::path& path) const;

 private:
  TransportMap(RadialMeasure measure, TransportOptions options);
  double log_sigma_prime(double r, double sigma) const;
  double sigma_from_masses(double lower, double upper) const;
  std::optional<double> hint_radius(double t) const;
  void estimate_lipschitz();

  RadialMeasure measure_;
  TransportOptions options_;
  double log_prefactor_ = 0.0;  // (n/2) ln 2pi - ln M
  double median_radius_ = 0.0;
  std::vector<double> r_, sigma_, sigma_prime_, mass_, tail_;
  LipschitzEstimate lipschitz_;
};

}  // namespace radiso
