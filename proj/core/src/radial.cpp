#include "radiso/radial.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <string>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/specfun.hpp"

namespace radiso {

namespace {

using numeric::kInf;

constexpr int kFinestOctave = -40;
constexpr int kSubdivisions = 8;
constexpr int kMaxOctave = 900;
constexpr double kNegligibleOctave = 1e-40;

double probe_limsup(const RadialDensity::Function& f, double& deep) {
  double best = 0.0;
  for (int k = 4; k <= 40; ++k) best = std::max(best, f(std::ldexp(1.0, -k)));
  deep = f(std::ldexp(1.0, -40));
  const double f30 = f(std::ldexp(1.0, -30));
  const double f35 = f(std::ldexp(1.0, -35));
  // Still growing geometrically at the deepest probes: treat as unbounded.
  if (deep > 2.0 * f30 && deep > f35 && f35 > f30) return kInf;
  return best;
}

std::string fmt(double v) { return csv::format(v); }

}  // namespace

// ---------------------------------------------------------------------------
// RadialDensity

RadialDensity RadialDensity::from_function(std::string name, Function f, Function log_f,
                                           double inner, double outer, std::vector<double> kinks,
                                           std::optional<double> f0_limsup) {
  if (!f) throw DomainError("radial density: empty function");
  if (!(inner >= 0.0) || !std::isfinite(inner) || !(outer > inner)) {
    throw SupportError("radial density: need 0 <= r_f < R_f, got [" + fmt(inner) + ", " +
                       fmt(outer) + "]");
  }
  RadialDensity d;
  d.name_ = std::move(name);
  d.f_ = std::move(f);
  d.log_f_ = std::move(log_f);
  d.inner_ = inner;
  d.outer_ = outer;
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::remove_if(kinks.begin(), kinks.end(),
                             [&](double k) { return !(k > inner && k < outer); }),
              kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  d.kinks_ = std::move(kinks);
  const Function clipped = [&d](double r) { return d(r); };
  double deep = 0.0;
  const double estimate = probe_limsup(clipped, deep);
  d.f0_deep_ = deep;
  d.f0_limsup_ = f0_limsup.value_or(estimate);
  return d;
}

RadialDensity RadialDensity::gaussian() {
  return from_function(
      "gaussian", [](double r) { return std::exp(-0.5 * r * r); },
      [](double r) { return -0.5 * r * r; }, 0.0, kInf, {}, 1.0);
}

RadialDensity RadialDensity::scaled_gaussian(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled-gaussian: c must be positive");
  const double k = 0.5 / (c * c);
  return from_function(
      "scaled-gaussian:c=" + fmt(c), [k](double r) { return std::exp(-k * r * r); },
      [k](double r) { return -k * r * r; }, 0.0, kInf, {}, 1.0);
}

RadialDensity RadialDensity::exp_power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("exp-power: p must be positive");
  return from_function(
      "exp-power:p=" + fmt(p), [p](double r) { return std::exp(-std::pow(r, p) / p); },
      [p](double r) { return -std::pow(r, p) / p; }, 0.0, kInf, {}, 1.0);
}

RadialDensity RadialDensity::indicator(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw DomainError("indicator: need 0 <= a < b < inf");
  }
  return from_function(
      "indicator:(" + fmt(a) + "," + fmt(b) + ")",
      [a, b](double r) { return (r > a && r < b) ? 1.0 : 0.0; },
      [a, b](double r) { return (r > a && r < b) ? 0.0 : -kInf; }, a, b, {},
      a == 0.0 ? 1.0 : 0.0);
}

RadialDensity RadialDensity::tabulated(std::vector<double> r, std::vector<double> f) {
  if (r.size() != f.size()) throw DomainError("tabulated density: r and f differ in length");
  if (r.size() < 2) throw DomainError("tabulated density: need at least two nodes");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || r[i] < 0.0) throw DomainError("tabulated density: bad radius");
    if (i && !(r[i] > r[i - 1])) {
      throw DomainError("tabulated density: radii must be strictly increasing");
    }
    if (!(f[i] >= 0.0) || !std::isfinite(f[i])) {
      throw DomainError("tabulated density: values must be finite and nonnegative");
    }
  }
  constexpr double kZero = 1e-300;
  std::size_t first = r.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (f[i] > kZero) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == r.size()) throw SupportError("tabulated density: f vanishes on every node");
  // f is linear between nodes, so the support begins at the last zero node
  // before the first positive one.
  const double inner = first > 0 ? r[first - 1] : r[0];
  const double outer = last + 1 < r.size() ? r[last + 1] : r[last];
  if (!(outer > inner)) throw SupportError("tabulated density: support has empty interior");

  auto rr = std::make_shared<const std::vector<double>>(r);
  auto ff = std::make_shared<const std::vector<double>>(f);
  auto interp = [rr, ff](double x) {
    const auto& R = *rr;
    const auto& F = *ff;
    if (x < R.front() || x > R.back()) return 0.0;
    auto it = std::upper_bound(R.begin(), R.end(), x);
    if (it == R.end()) return F.back();
    const auto j = static_cast<std::size_t>(it - R.begin());
    const double t = (x - R[j - 1]) / (R[j] - R[j - 1]);
    return std::max(0.0, F[j - 1] + t * (F[j] - F[j - 1]));
  };
  auto log_interp = [interp](double x) { return std::log(interp(x)); };
  RadialDensity d = from_function("table", interp, log_interp, inner, outer, r);
  d.tabulated_ = true;
  d.table_r_ = std::move(r);
  d.table_f_ = std::move(f);
  return d;
}

RadialDensity RadialDensity::from_csv(const std::filesystem::path& path) {
  static const std::array<std::string, 2> header{"r", "f"};
  const auto table = csv::read(path, header);
  std::vector<double> r, f;
  r.reserve(table.rows.size());
  f.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    r.push_back(row[0]);
    f.push_back(row[1]);
  }
  try {
    auto d = tabulated(std::move(r), std::move(f));
    d.name_ = "table:" + path.string();
    return d;
  } catch (const DomainError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double RadialDensity::operator()(double r) const {
  if (!(r >= inner_) || r > outer_) return 0.0;
  return f_(r);
}

double RadialDensity::log_value(double r) const {
  if (!(r >= inner_) || r > outer_) return -kInf;
  if (log_f_) return log_f_(r);
  return std::log(f_(r));
}

std::optional<double> find_support_gap(const RadialDensity& density) {
  if (density.is_tabulated()) {
    const auto r = density.table_radii();
    const auto f = density.table_values();
    std::size_t first = r.size(), last = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (f[i] > 1e-300) {
        first = std::min(first, i);
        last = i;
      }
    }
    for (std::size_t i = first; i + 1 <= last; ++i) {
      if (f[i] <= 1e-300 && f[i + 1] <= 1e-300) return r[i];
    }
    return std::nullopt;
  }
  const double lo = density.inner_radius();
  const double span = std::isfinite(density.outer_radius()) ? density.outer_radius() - lo : 1e4;
  constexpr int kProbes = 8192;
  bool seen_positive = false;
  std::optional<double> zero_run;
  for (int i = 0; i < kProbes; ++i) {
    // Geometric offsets from both support ends.
    const double t = -40.0 * (1.0 - static_cast<double>(i) / (kProbes - 1));
    const double r = lo + span * std::exp2(t) * (1.0 - 1e-12);
    const bool positive = density.log_value(r) > -kInf;
    if (positive) {
      if (seen_positive && zero_run) return zero_run;
      seen_positive = true;
      zero_run.reset();
    } else if (seen_positive && !zero_run) {
      zero_run = r;
    }
  }
  // Linear sweep catches gaps far from the inner edge.
  seen_positive = false;
  zero_run.reset();
  for (int i = 1; i < kProbes; ++i) {
    const double r = lo + span * static_cast<double>(i) / kProbes;
    const bool positive = density.log_value(r) > -kInf;
    if (positive) {
      if (seen_positive && zero_run) return zero_run;
      seen_positive = true;
      zero_run.reset();
    } else if (seen_positive && !zero_run) {
      zero_run = r;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RadialMeasure

struct RadialMeasure::Table {
  std::vector<double> b;    // breakpoints b_0 = r_f < ... < b_K
  std::vector<double> seg;  // mass on [b_j, b_{j+1}]
  std::vector<double> C;    // mass on [r_f, b_j]
  std::vector<double> U;    // mass on [b_j, R_f)
  double beyond = 0.0;      // mass on [b_K, inf) when R_f is infinite
  double total = 0.0;
  double mass = 0.0;
  bool infinite = false;
  numeric::QuadratureOptions quad;
};

double RadialMeasure::integrand(double s) const {
  if (!(s > 0.0)) return 0.0;
  double v = density_.log_value(s);
  if (v == -kInf || std::isnan(v)) return 0.0;
  if (n_ > 1) v += (n_ - 1) * std::log(s);
  return std::exp(v);
}

RadialMeasure::RadialMeasure(RadialDensity density, int n, numeric::QuadratureOptions quad)
    : density_(std::move(density)), n_(n) {
  if (n < 1) throw DomainError("radial measure: dimension must be >= 1");
  auto t = std::make_shared<Table>();
  t->quad = quad;
  const double lo = density_.inner_radius();
  const double hi = density_.outer_radius();
  const auto kinks = density_.kinks();
  auto seg_integral = [&](double a, double b) {
    const double v = numeric::integrate([this](double s) { return integrand(s); }, a, b, quad);
    if (!std::isfinite(v) || v < 0.0) {
      throw DivergentMassError(density_.name() + ": radial mass integral does not converge (n=" +
                               std::to_string(n_) + ")");
    }
    return v;
  };

  std::vector<double>& b = t->b;
  if (std::isfinite(hi)) {
    t->infinite = false;
    const double w = hi - lo;
    // Offsets below a few hundred ulps of the endpoints resolve nothing.
    const double finest = 256.0 * std::numeric_limits<double>::epsilon() * hi;
    b.push_back(lo);
    b.push_back(hi);
    for (int m = kSubdivisions; m <= -kFinestOctave * kSubdivisions; ++m) {
      const double off = w * std::exp2(-static_cast<double>(m) / kSubdivisions);
      if (off < finest) break;
      b.push_back(lo + off);
      b.push_back(hi - off);
    }
    b.insert(b.end(), kinks.begin(), kinks.end());
    std::sort(b.begin(), b.end());
    b.erase(std::remove_if(b.begin(), b.end(), [&](double x) { return x < lo || x > hi; }),
            b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (std::size_t j = 0; j + 1 < b.size(); ++j) t->seg.push_back(seg_integral(b[j], b[j + 1]));
  } else {
    t->infinite = true;
    b.push_back(lo);
    std::size_t kink = 0;
    auto push_until = [&](double x) {
      while (kink < kinks.size() && kinks[kink] < x) {
        if (kinks[kink] > b.back()) {
          t->seg.push_back(seg_integral(b.back(), kinks[kink]));
          b.push_back(kinks[kink]);
        }
        ++kink;
      }
      if (x > b.back()) {
        t->seg.push_back(seg_integral(b.back(), x));
        b.push_back(x);
      }
    };
    push_until(lo + std::exp2(kFinestOctave));
    double running = 0.0;
    for (double v : t->seg) running += v;
    double previous = 0.0;
    int flat_octaves = 0;
    for (int octave = kFinestOctave;; ++octave) {
      if (octave > kMaxOctave) {
        if (running == 0.0) throw SupportError(density_.name() + ": density has zero mass");
        throw DivergentMassError(density_.name() + ": radial mass not exhausted by r = 2^" +
                                 std::to_string(kMaxOctave) + " (n=" + std::to_string(n_) + ")");
      }
      const std::size_t before = t->seg.size();
      for (int j = 1; j <= kSubdivisions; ++j) {
        push_until(lo + std::exp2(octave + static_cast<double>(j) / kSubdivisions));
      }
      double octave_mass = 0.0;
      for (std::size_t j = before; j < t->seg.size(); ++j) octave_mass += t->seg[j];
      running += octave_mass;
      if (!std::isfinite(running)) {
        throw DivergentMassError(density_.name() + ": radial mass overflows (n=" +
                                 std::to_string(n_) + ")");
      }
      if (running > 0.0 && octave_mass <= previous && octave_mass <= kNegligibleOctave * running) {
        break;
      }
      if (previous > 0.0 && octave_mass >= 0.99 * previous) {
        if (++flat_octaves >= 64) {
          throw DivergentMassError(density_.name() + ": radial mass integral diverges (n=" +
                                   std::to_string(n_) + ")");
        }
      } else {
        flat_octaves = 0;
      }
      previous = octave_mass;
    }
    t->beyond = numeric::integrate([this](double s) { return integrand(s); }, b.back(), kInf, quad);
    if (!std::isfinite(t->beyond) || t->beyond < 0.0) t->beyond = 0.0;
  }

  const std::size_t K = t->seg.size();
  t->C.assign(K + 1, 0.0);
  t->U.assign(K + 1, 0.0);
  for (std::size_t j = 0; j < K; ++j) t->C[j + 1] = t->C[j] + t->seg[j];
  t->U[K] = t->beyond;
  for (std::size_t j = K; j-- > 0;) t->U[j] = t->U[j + 1] + t->seg[j];
  t->total = t->U[0];
  if (!(t->total > 0.0)) throw SupportError(density_.name() + ": density has zero mass");
  t->mass = sphere_constants(n_).surface * t->total;
  if (!std::isfinite(t->mass)) {
    throw DivergentMassError(density_.name() + ": normalizing mass overflows");
  }
  table_ = std::move(t);
}

double RadialMeasure::mass() const noexcept { return table_->mass; }

const numeric::QuadratureOptions& RadialMeasure::quadrature() const noexcept {
  return table_->quad;
}

std::span<const double> RadialMeasure::grid_radii() const noexcept { return table_->b; }

double RadialMeasure::table_end() const noexcept { return table_->b.back(); }

std::vector<double> RadialMeasure::cdf_grid() const {
  std::vector<double> out(table_->C.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::min(1.0, table_->C[j] / table_->total);
  }
  if (!table_->infinite) out.back() = 1.0;
  return out;
}

double RadialMeasure::lower_integral(double r) const {
  const auto& t = *table_;
  if (!(r > t.b.front())) return 0.0;
  if (r >= t.b.back()) {
    if (!t.infinite) return t.total;
    return t.total - tail_integral(r);
  }
  const auto j = static_cast<std::size_t>(std::upper_bound(t.b.begin(), t.b.end(), r) - t.b.begin()) - 1;
  return t.C[j] + numeric::integrate([this](double s) { return integrand(s); }, t.b[j], r, t.quad);
}

double RadialMeasure::tail_integral(double r) const {
  const auto& t = *table_;
  auto f = [this](double s) { return integrand(s); };
  if (!(r > t.b.front())) return t.total;
  if (r >= t.b.back()) {
    if (!t.infinite) return 0.0;
    const double v = numeric::integrate(f, r, kInf, t.quad);
    return std::isfinite(v) ? std::max(v, 0.0) : 0.0;
  }
  const auto j = static_cast<std::size_t>(std::upper_bound(t.b.begin(), t.b.end(), r) - t.b.begin());
  return t.U[j] + numeric::integrate(f, r, t.b[j], t.quad);
}

double RadialMeasure::cdf(double r) const {
  const auto& t = *table_;
  if (!(r > t.b.front())) return 0.0;
  if (!t.infinite && r >= t.b.back()) return 1.0;
  if (r < t.b.back()) {
    const auto j =
        static_cast<std::size_t>(std::upper_bound(t.b.begin(), t.b.end(), r) - t.b.begin()) - 1;
    if (t.C[j] + 0.5 * t.seg[j] <= 0.5 * t.total) {
      return std::clamp(lower_integral(r) / t.total, 0.0, 1.0);
    }
  }
  return std::clamp(1.0 - tail_integral(r) / t.total, 0.0, 1.0);
}

double RadialMeasure::tail(double r) const {
  const auto& t = *table_;
  if (!(r > t.b.front())) return 1.0;
  if (!t.infinite && r >= t.b.back()) return 0.0;
  if (r < t.b.back()) {
    const auto j =
        static_cast<std::size_t>(std::upper_bound(t.b.begin(), t.b.end(), r) - t.b.begin()) - 1;
    if (t.C[j] + 0.5 * t.seg[j] <= 0.5 * t.total) {
      return std::clamp(1.0 - lower_integral(r) / t.total, 0.0, 1.0);
    }
  }
  return std::clamp(tail_integral(r) / t.total, 0.0, 1.0);
}

double RadialMeasure::radial_pdf(double r) const { return integrand(r) / table_->total; }

double RadialMeasure::density_at(double r) const { return density_(r) / table_->mass; }

double RadialMeasure::radius_at_mass(double u, std::optional<double> hint) const {
  const auto& t = *table_;
  if (std::isnan(u)) throw DomainError("radius_at_mass: NaN mass");
  if (u <= 0.0) return t.b.front();
  if (u >= 1.0) return t.infinite ? kInf : t.b.back();
  if (u > 0.5) return radius_at_tail(1.0 - u, hint);
  const double target = u * t.total;
  auto it = std::upper_bound(t.C.begin(), t.C.end(), target);
  std::size_t j = static_cast<std::size_t>(it - t.C.begin());
  if (j == 0) return t.b.front();
  --j;
  if (j + 1 >= t.b.size()) return radius_at_tail(1.0 - u, hint);
  const double a = t.b[j];
  const double c = t.b[j + 1];
  auto g = [&](double r) {
    return t.C[j] +
           numeric::integrate([this](double s) { return integrand(s); }, a, r, t.quad) - target;
  };
  auto dg = [this](double r) { return integrand(r); };
  return numeric::solve_increasing(g, dg, a, c, hint.value_or(0.5 * (a + c)), 1e-14);
}

double RadialMeasure::radius_at_tail(double q, std::optional<double> hint) const {
  const auto& t = *table_;
  if (std::isnan(q)) throw DomainError("radius_at_tail: NaN mass");
  if (q >= 1.0) return t.b.front();
  if (q <= 0.0) return t.infinite ? kInf : t.b.back();
  const double target = q * t.total;
  auto f = [this](double s) { return integrand(s); };
  auto dg = [this](double r) { return integrand(r); };
  if (target < t.U.back()) {
    // Beyond the table: bracket by doubling the offset from its end.
    auto g = [&](double r) { return target - numeric::integrate(f, r, kInf, t.quad); };
    double a = t.b.back();
    double step = std::max(a - t.b.front(), 1.0);
    double c = a + step;
    while (g(c) < 0.0) {
      a = c;
      step *= 2.0;
      c = a + step;
      if (!std::isfinite(c)) return kInf;
    }
    return numeric::solve_increasing(g, dg, a, c, hint.value_or(0.5 * (a + c)), 1e-14);
  }
  // U is nonincreasing; find j with U[j+1] <= target < U[j].
  auto it = std::lower_bound(t.U.begin(), t.U.end(), target, std::greater<double>());
  std::size_t j1 = static_cast<std::size_t>(it - t.U.begin());
  if (j1 == 0) return t.b.front();
  const std::size_t j = j1 - 1;
  const double a = t.b[j];
  const double c = t.b[j + 1];
  auto g = [&](double r) { return target - (t.U[j + 1] + numeric::integrate(f, r, c, t.quad)); };
  return numeric::solve_increasing(g, dg, a, c, hint.value_or(0.5 * (a + c)), 1e-14);
}

// ---------------------------------------------------------------------------
// Free functions

double normalizing_mass(const RadialDensity& density, int n) {
  return RadialMeasure(density, n).mass();
}

double radial_cdf(const RadialMeasure& measure, double r) {
  if (r < 0.0) throw DomainError("radial_cdf: radius must be nonnegative");
  return measure.cdf(r);
}

double cdf_1d(const RadialMeasure& measure, double alpha) {
  if (measure.dimension() != 1) {
    throw DimensionMismatchError("cdf_1d: measure must be one-dimensional");
  }
  if (std::isnan(alpha)) throw DomainError("cdf_1d: NaN argument");
  if (alpha == 0.0) return 0.5;
  if (alpha < 0.0) return 0.5 * measure.tail(-alpha);
  return 1.0 - 0.5 * measure.tail(alpha);
}

double quantile_1d(const RadialMeasure& measure, double u) {
  if (measure.dimension() != 1) {
    throw DimensionMismatchError("quantile_1d: measure must be one-dimensional");
  }
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile_1d: probability outside [0,1]");
  if (u == 0.5) return 0.0;
  if (u < 0.5) return -measure.radius_at_tail(2.0 * u);
  return measure.radius_at_tail(2.0 * (1.0 - u));
}

ConditionAReport check_condition_a(const RadialDensity& density) {
  ConditionAReport rep;
  rep.inner_radius = density.inner_radius();
  const double outer = density.outer_radius();
  const double span = std::isfinite(outer) ? outer : 1e6;
  constexpr int kProbes = 4096;
  auto probe = [&](double r) {
    if (rep.positive && !(density.log_value(r) > -kInf)) {
      rep.positive = false;
      rep.positivity_witness = r;
    }
  };
  for (int i = 0; i < kProbes && rep.positive; ++i) {
    probe(span * std::exp2(-40.0 * (1.0 - static_cast<double>(i) / kProbes)));
  }
  for (int i = 1; i < kProbes && rep.positive; ++i) {
    probe(span * static_cast<double>(i) / kProbes);
  }
  double low = kInf;
  for (int k = 4; k <= 40; ++k) low = std::min(low, density(std::ldexp(1.0, -k)));
  rep.liminf_estimate = low;
  rep.liminf_positive = low > 0.0 && density.inner_radius() == 0.0;
  return rep;
}

}  // namespace radiso
