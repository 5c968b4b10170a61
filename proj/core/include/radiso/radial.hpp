#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radiso/numeric.hpp"

namespace radiso {

// A nonnegative radial profile f on (0, inf) with support [r_f, R_f].
//
// Closed-form profiles carry an analytic ln f so that evaluations far in the
// tail do not underflow. Tabulated profiles are piecewise linear between
// nodes and vanish outside the table.
class RadialDensity {
 public:
  using Function = std::function<double(double)>;

  // `log_f` may be empty, in which case ln f(r) is computed from f.
  // `kinks` lists radii where f is not smooth; they become quadrature breakpoints.
  // f0_limsup: estimated from f on r = 2^-k, k = 4..40, unless given.
  static RadialDensity from_function(std::string name, Function f, Function log_f, double inner,
                                     double outer, std::vector<double> kinks = {},
                                     std::optional<double> f0_limsup = std::nullopt);

  static RadialDensity gaussian();
  // exp(-r^2 / (2 c^2)).
  static RadialDensity scaled_gaussian(double c);
  // exp(-r^p / p).
  static RadialDensity exp_power(double p);
  // Indicator of the open interval (a, b).
  static RadialDensity indicator(double a, double b);
  // Strictly increasing r, nonnegative f, at least two nodes.
  static RadialDensity tabulated(std::vector<double> r, std::vector<double> f);
  // CSV with header "r,f".
  static RadialDensity from_csv(const std::filesystem::path& path);

  double operator()(double r) const;
  double log_value(double r) const;

  const std::string& name() const noexcept { return name_; }
  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }
  double f0_limsup() const noexcept { return f0_limsup_; }
  // f evaluated at the deepest probe 2^-40; used to flag borderline limsup estimates.
  double f0_deep() const noexcept { return f0_deep_; }
  std::span<const double> kinks() const noexcept { return kinks_; }
  bool is_tabulated() const noexcept { return tabulated_; }
  // Table nodes when tabulated, empty otherwise.
  std::span<const double> table_radii() const noexcept { return table_r_; }
  std::span<const double> table_values() const noexcept { return table_f_; }

 private:
  RadialDensity() = default;

  std::string name_;
  Function f_;
  Function log_f_;
  double inner_ = 0.0;
  double outer_ = numeric::kInf;
  double f0_limsup_ = 0.0;
  double f0_deep_ = 0.0;
  std::vector<double> kinks_;
  bool tabulated_ = false;
  std::vector<double> table_r_;
  std::vector<double> table_f_;
};

// First radius inside (r_f, R_f) where f vanishes on a whole sub-interval,
// or nullopt when the support looks connected on the probe grid.
std::optional<double> find_support_gap(const RadialDensity& density);

// mu_n^f: the probability measure on R^n with density f(|x|) / M_n^f.
//
// Holds a table of cumulative masses over breakpoints so that ball masses,
// tail masses and their inverses cost one short quadrature each.
class RadialMeasure {
 public:
  // Throws DivergentMassError when int f(r) r^{n-1} dr does not converge.
  RadialMeasure(RadialDensity density, int n, numeric::QuadratureOptions quad = {});

  const RadialDensity& density() const noexcept { return density_; }
  int dimension() const noexcept { return n_; }

  // M_n^f = A_n int_0^inf f(r) r^{n-1} dr.
  double mass() const noexcept;

  // F_n(r) = mu_n^f[B_r(0)], clamped to [0, 1].
  double cdf(double r) const;
  // 1 - F_n(r), computed directly from the upper tail.
  double tail(double r) const;
  // Unnormalized int_r^{R_f} f(s) s^{n-1} ds.
  double tail_integral(double r) const;
  // dF_n/dr.
  double radial_pdf(double r) const;
  // Lebesgue density f(r) / M_n^f of the measure at any x with |x| = r.
  double density_at(double r) const;

  // Smallest r with F_n(r) = u. `hint` seeds Newton iterations.
  double radius_at_mass(double u, std::optional<double> hint = std::nullopt) const;
  // Smallest r with 1 - F_n(r) = q.
  double radius_at_tail(double q, std::optional<double> hint = std::nullopt) const;

  // Breakpoint table: radii and F_n at each.
  std::span<const double> grid_radii() const noexcept;
  std::vector<double> cdf_grid() const;
  // Last breakpoint; equals R_f when R_f is finite.
  double table_end() const noexcept;

  const numeric::QuadratureOptions& quadrature() const noexcept;

 private:
  struct Table;
  double integrand(double s) const;
  double lower_integral(double r) const;

  RadialDensity density_;
  int n_;
  std::shared_ptr<const Table> table_;
};

double normalizing_mass(const RadialDensity& density, int n);
double radial_cdf(const RadialMeasure& measure, double r);
// F(alpha) = mu_1^f[(-inf, alpha]]; requires a one-dimensional measure.
double cdf_1d(const RadialMeasure& measure, double alpha);
// Inverse of cdf_1d.
double quantile_1d(const RadialMeasure& measure, double u);

struct ConditionAReport {
  bool positive = true;                   // f > 0 on the probe grid of (0, R_f)
  std::optional<double> positivity_witness;  // first radius where f vanished
  bool liminf_positive = true;            // lim inf_{r -> 0} f(r) > 0
  double liminf_estimate = 0.0;
  double inner_radius = 0.0;
  bool pass() const noexcept { return positive && liminf_positive; }
};

// f positive on (0, R_f) and lim inf_{r -> 0} f(r) > 0.
ConditionAReport check_condition_a(const RadialDensity& density);

}  // namespace radiso
