#include "radiso/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/random.hpp"
#include "radiso/specfun.hpp"

namespace radiso {
namespace {

using numeric::kInf;

constexpr double kAuditTolerance = 1e-9;

// P(X >= x) for x >= 0 under a one-dimensional radial measure.
double upper_mass(const RadialMeasure& m, double x) {
  if (std::isinf(x)) return 0.0;
  return 0.5 * m.tail(x);
}

// mu[[lo, hi]], arranged so that both ends are read from the nearer tail.
double mass_between(const RadialMeasure& m, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (lo >= 0.0) return std::max(upper_mass(m, lo) - upper_mass(m, hi), 0.0);
  if (hi <= 0.0) return std::max(upper_mass(m, -hi) - upper_mass(m, -lo), 0.0);
  return std::max(1.0 - upper_mass(m, -lo) - upper_mass(m, hi), 0.0);
}

void require_1d(const RadialMeasure& m, const char* who) {
  if (m.dimension() != 1) {
    throw DimensionMismatchError(std::string(who) + ": measure must be one-dimensional");
  }
}

std::string describe(std::span<const Interval> set) {
  std::string s;
  for (const auto& iv : set) {
    if (!s.empty()) s += " u ";
    s += "[" + csv::format(iv.lo) + ", " + csv::format(iv.hi) + "]";
  }
  return s.empty() ? "{}" : s;
}

double profile_of_pair(double a, double complement) {
  return gaussian_profile(std::clamp(std::min(a, complement), 0.0, 0.5));
}

void record(AuditReport& rep, double slack, std::span<const Interval> set, double a, double mu,
            bool halfline) {
  ++rep.trials;
  if (slack < -kAuditTolerance) ++rep.violations;
  if (slack < rep.min_slack) {
    rep.min_slack = slack;
    rep.witness.assign(set.begin(), set.end());
    rep.witness_a = a;
    rep.witness_mu_plus = mu;
  }
  if (halfline) rep.min_slack_halfline = std::min(rep.min_slack_halfline, slack);
}

double finite_lipschitz(const TransportMap& map, const char* who) {
  const double L = map.lipschitz_constant();
  if (!std::isfinite(L)) {
    throw PreconditionError(std::string(who) + ": transport is not Lipschitz (L = inf)");
  }
  return L;
}

void throw_if_violated(const AuditReport& rep, const char* who) {
  if (rep.violations == 0) return;
  std::ostringstream msg;
  msg << who << ": " << rep.violations << " violation(s); min slack " << csv::format(rep.min_slack)
      << " at " << describe(rep.witness) << " (a=" << csv::format(rep.witness_a)
      << ", mu_plus=" << csv::format(rep.witness_mu_plus) << ")";
  throw AuditViolationError(msg.str());
}

}  // namespace

double gaussian_profile(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("gaussian_profile: a outside [0,1]");
  if (a == 0.0 || a == 1.0) return 0.0;
  return gauss_pdf(gauss_quantile(std::min(a, 1.0 - a)));
}

ProfileBound bound_curve(const TransportMap& map, int grid_size, const RadialDensity& density) {
  if (grid_size < 2) throw DomainError("bound_curve: grid_size must be at least 2");
  ProfileBound out;
  out.n = map.dimension();
  out.L = map.lipschitz_constant();
  out.unbounded = !std::isfinite(out.L);
  const double f0 = density.f0_limsup();
  out.half_borderline = f0 > 0.0 && std::isfinite(f0) && density.f0_deep() < 0.1 * f0;
  out.edge_case_half = f0 > 0.0 && std::isfinite(f0) && !out.half_borderline;

  const auto count = static_cast<std::size_t>(grid_size);
  out.a.resize(count);
  out.bound.resize(count);
  out.certified.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(count - 1);
    out.a[i] = a;
    if (out.unbounded) {
      out.bound[i] = 0.0;
      out.certified[i] = false;
      continue;
    }
    out.bound[i] = gaussian_profile(a) / out.L;
    out.certified[i] = a != 0.5 || out.edge_case_half;
  }
  return out;
}

ProfileBound bound_curve(const TransportMap& map, int grid_size) {
  return bound_curve(map, grid_size, map.measure().density());
}

void write_profile_csv(const std::filesystem::path& path, const ProfileBound& curve) {
  static const std::array<std::string, 3> header{"a", "bound", "certified"};
  csv::Writer out(path, header);
  for (std::size_t i = 0; i < curve.a.size(); ++i) {
    const std::array<double, 3> row{curve.a[i], curve.bound[i], curve.certified[i] ? 1.0 : 0.0};
    out.row(row);
  }
  out.close();
}

std::vector<Interval> canonicalize(std::span<const Interval> set, double outer_radius) {
  std::vector<Interval> v(set.begin(), set.end());
  for (const auto& iv : v) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      throw DomainError("interval [" + csv::format(iv.lo) + ", " + csv::format(iv.hi) +
                        "] is not a closed interval");
    }
    if (iv.lo == kInf || iv.hi == -kInf) {
      throw DomainError("interval lies entirely at infinity");
    }
    for (double b : {iv.lo, iv.hi}) {
      if (std::isfinite(b) && !(std::abs(b) < outer_radius)) {
        throw SupportError("endpoint " + csv::format(b) + " outside (-R_f, R_f)");
      }
    }
  }
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) {
    return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
  });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.lo < out.back().hi) {
        throw OverlappingIntervalsError("intervals overlap near " + csv::format(iv.lo));
      }
      out.back().hi = iv.hi;
      continue;
    }
    out.push_back(iv);
  }
  return out;
}

BoundaryMeasure boundary_measure_1d(const RadialMeasure& measure, std::span<const Interval> set) {
  require_1d(measure, "boundary_measure_1d");
  const auto c = canonicalize(set, measure.density().outer_radius());
  BoundaryMeasure out;
  if (c.empty()) return out;
  for (const auto& iv : c) {
    out.a += mass_between(measure, iv.lo, iv.hi);
    if (std::isfinite(iv.lo)) out.mu_plus += measure.density_at(std::abs(iv.lo));
    if (std::isfinite(iv.hi)) out.mu_plus += measure.density_at(std::abs(iv.hi));
  }
  out.complement = mass_between(measure, -kInf, c.front().lo);
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    out.complement += mass_between(measure, c[k].hi, c[k + 1].lo);
  }
  out.complement += mass_between(measure, c.back().hi, kInf);
  return out;
}

NumericBoundary boundary_measure_1d_numeric(const RadialMeasure& measure,
                                            std::span<const Interval> set) {
  require_1d(measure, "boundary_measure_1d_numeric");
  const auto c = canonicalize(set, measure.density().outer_radius());
  NumericBoundary out;
  if (c.empty()) return out;
  for (std::size_t e = 0; e < out.eps.size(); ++e) {
    const double eps = out.eps[e];
    double collar = 0.0;
    if (std::isfinite(c.front().lo)) {
      collar += mass_between(measure, c.front().lo - eps, c.front().lo);
    }
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      const double lo = c[k].hi;
      const double hi = c[k + 1].lo;
      if (hi - lo <= 2.0 * eps) {
        collar += mass_between(measure, lo, hi);
      } else {
        collar += mass_between(measure, lo, lo + eps) + mass_between(measure, hi - eps, hi);
      }
    }
    if (std::isfinite(c.back().hi)) {
      collar += mass_between(measure, c.back().hi, c.back().hi + eps);
    }
    out.quotient[e] = collar / eps;
  }
  out.richardson = (10.0 * out.quotient[2] - out.quotient[1]) / 9.0;
  return out;
}

AuditReport bound_audit(const RadialMeasure& measure, const TransportMap& map, std::size_t trials,
                        std::uint64_t seed, bool report_only) {
  require_1d(measure, "bound_audit");
  const double L = finite_lipschitz(map, "bound_audit");
  AuditReport rep;
  std::vector<Interval> set;
  std::array<double, 6> u{};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    random::Stream rng(seed, trial);
    set.clear();
    const bool halfline = rng.uniform32() < 0.25;
    if (halfline) {
      const double b = quantile_1d(measure, rng.uniform());
      if (rng.uniform32() < 0.5) {
        set.push_back({-kInf, b});
      } else {
        set.push_back({b, kInf});
      }
    } else {
      const auto k = 1 + static_cast<std::size_t>(3.0 * rng.uniform32());
      for (std::size_t i = 0; i < 2 * k; ++i) u[i] = rng.uniform();
      std::sort(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(2 * k));
      for (std::size_t i = 0; i < k; ++i) {
        set.push_back({quantile_1d(measure, u[2 * i]), quantile_1d(measure, u[2 * i + 1])});
      }
      const double extend = rng.uniform32();
      if (extend < 0.2) {
        set.front().lo = -kInf;
      } else if (extend < 0.4) {
        set.back().hi = kInf;
      }
    }
    const auto bm = boundary_measure_1d(measure, set);
    const double slack = bm.mu_plus - profile_of_pair(bm.a, bm.complement) / L;
    record(rep, slack, set, bm.a, bm.mu_plus, halfline);
  }
  if (!report_only) throw_if_violated(rep, "bound_audit");
  return rep;
}

AuditReport ball_audit(const RadialMeasure& measure, const TransportMap& map, int count,
                       bool report_only) {
  const double L = finite_lipschitz(map, "ball_audit");
  AuditReport rep;
  for (int i = 0; i < count; ++i) {
    // Logistic spread of ball masses so both tails are exercised.
    const double z = count > 1 ? -12.0 + 24.0 * i / (count - 1) : 0.0;
    const double u = 1.0 / (1.0 + std::exp(-z));
    const double r = u > 0.5 ? measure.radius_at_tail(1.0 - u) : measure.radius_at_mass(u);
    if (!(r > measure.density().inner_radius() && r < measure.density().outer_radius())) continue;
    const double a = measure.cdf(r);
    const double q = measure.tail(r);
    const double mu = measure.radial_pdf(r);
    const std::array<Interval, 1> ball{Interval{0.0, r}};
    record(rep, mu - profile_of_pair(a, q) / L, ball, a, mu, false);
  }
  if (!report_only) throw_if_violated(rep, "ball_audit");
  return rep;
}

double marginal_density(const RadialMeasure& measure, double alpha) {
  const int n = measure.dimension();
  const auto& f = measure.density();
  const double x = std::abs(alpha);
  if (n == 1) return measure.density_at(x);
  const double outer = f.outer_radius();
  if (!(x < outer)) return 0.0;
  // Integrate f(sqrt(alpha^2 + rho^2)) rho^{n-2} over the orthogonal radius rho.
  const double inner = f.inner_radius();
  const double rho0 = inner > x ? std::sqrt((inner - x) * (inner + x)) : 0.0;
  const double rho1 = std::isfinite(outer) ? std::sqrt((outer - x) * (outer + x)) : kInf;
  const double e = n - 2.0;
  auto g = [&](double rho) {
    const double lf = f.log_value(std::hypot(x, rho));
    if (!(lf > -kInf)) return 0.0;
    return e == 0.0 ? std::exp(lf) : std::exp(lf + e * std::log(rho));
  };
  const double integral = numeric::integrate(g, rho0, rho1, measure.quadrature());
  return integral * sphere_constants(n - 1).surface / measure.mass();
}

AuditReport halfspace_audit(const RadialMeasure& measure, const TransportMap& map, int count,
                            bool report_only) {
  const double L = finite_lipschitz(map, "halfspace_audit");
  const int n = measure.dimension();
  AuditReport rep;
  // P(x_1 >= alpha | |x| = r) = I_{1 - alpha^2/r^2}((n-1)/2, 1/2) / 2 for r > alpha.
  auto upper = [&](double alpha) {
    if (n == 1) return upper_mass(measure, alpha);
    const double lo = std::max(alpha, measure.density().inner_radius());
    auto g = [&](double r) {
      const double w = 1.0 - (alpha / r) * (alpha / r);
      if (!(w > 0.0)) return 0.0;
      return 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, w) * measure.radial_pdf(r);
    };
    double total = 0.0;
    const auto grid = measure.grid_radii();
    double a = lo;
    for (double b : grid) {
      if (b <= a) continue;
      total += numeric::integrate(g, a, b, measure.quadrature());
      a = b;
    }
    if (measure.density().outer_radius() == kInf) {
      total += numeric::integrate(g, a, kInf, measure.quadrature());
    }
    return total;
  };
  for (int i = 0; i < count; ++i) {
    const double u = count > 1 ? 0.5 + 0.49999 * i / (count - 1) : 0.5;
    const double alpha = measure.radius_at_mass(2.0 * u - 1.0);
    if (!(alpha < measure.density().outer_radius())) continue;
    const double q = alpha == 0.0 ? 0.5 : upper(alpha);
    const double mu = marginal_density(measure, alpha);
    const std::array<Interval, 1> half{Interval{alpha, kInf}};
    record(rep, mu - profile_of_pair(1.0 - q, q) / L, half, q, mu, true);
  }
  if (!report_only) throw_if_violated(rep, "halfspace_audit");
  return rep;
}

}  // namespace radiso
