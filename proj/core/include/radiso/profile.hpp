#pragma once

// The Gaussian isoperimetric profile, the lower-bound curve I[gamma_1](a) / L,
// and exact boundary measures of interval unions used to audit it.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "radiso/transport.hpp"

namespace radiso {

// G'(G^{-1}(a)); 0 at a = 0 and a = 1. Throws DomainError outside [0, 1].
double gaussian_profile(double a);

struct ProfileBound {
  int n = 0;
  double L = 0.0;
  bool unbounded = false;  // L = inf, the curve is identically 0
  std::vector<double> a;
  std::vector<double> bound;
  std::vector<bool> certified;
  // Whether a = 1/2 is covered: lim sup_{r -> 0} f(r) in (0, inf) and not borderline.
  bool edge_case_half = false;
  // f(2^-40) < 0.1 f0_limsup, so the lim sup estimate is not trusted.
  bool half_borderline = false;
};

// Uniform grid of `grid_size` >= 2 points on [0, 1].
ProfileBound bound_curve(const TransportMap& map, int grid_size, const RadialDensity& density);
ProfileBound bound_curve(const TransportMap& map, int grid_size);

// Columns a,bound,certified.
void write_profile_csv(const std::filesystem::path& path, const ProfileBound& curve);

// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo;
  double hi;
};

// Sorted, with touching intervals merged. Throws OverlappingIntervalsError,
// and SupportError when a finite endpoint lies outside (-R_f, R_f).
std::vector<Interval> canonicalize(std::span<const Interval> set, double outer_radius);

struct BoundaryMeasure {
  double a = 0.0;           // mu[A]
  double complement = 1.0;  // mu[R \ A], summed directly rather than as 1 - a
  double mu_plus = 0.0;     // boundary measure
};

// Requires a one-dimensional measure.
BoundaryMeasure boundary_measure_1d(const RadialMeasure& measure, std::span<const Interval> set);

struct NumericBoundary {
  std::array<double, 3> eps{1e-3, 1e-4, 1e-5};
  std::array<double, 3> quotient{};  // (mu[A^eps] - mu[A]) / eps
  double richardson = 0.0;           // from the two smallest eps
};

NumericBoundary boundary_measure_1d_numeric(const RadialMeasure& measure,
                                            std::span<const Interval> set);

struct AuditReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double min_slack = numeric::kInf;
  std::vector<Interval> witness;  // set attaining min_slack
  double witness_a = 0.0;
  double witness_mu_plus = 0.0;
  double min_slack_halfline = numeric::kInf;
};

// Random unions of at most three intervals (a quarter of them half-lines)
// with endpoints at uniform quantiles of the measure; checks
// mu_plus >= gaussian_profile(a) / L - 1e-9 for each.
// Throws PreconditionError when L is infinite and, unless `report_only`,
// AuditViolationError on any violation.
AuditReport bound_audit(const RadialMeasure& measure, const TransportMap& map, std::size_t trials,
                        std::uint64_t seed, bool report_only = false);

// Balls B_r and their complements at `count` radii spread over the mass range;
// boundary measure F_n'(r). Requires a finite L.
AuditReport ball_audit(const RadialMeasure& measure, const TransportMap& map, int count = 64,
                       bool report_only = false);

// Half-spaces {x_1 <= alpha}; boundary measure is the x_1-marginal density.
AuditReport halfspace_audit(const RadialMeasure& measure, const TransportMap& map, int count = 41,
                            bool report_only = false);

// Density of the first coordinate of mu_n^f at alpha.
double marginal_density(const RadialMeasure& measure, double alpha);

}  // namespace radiso
