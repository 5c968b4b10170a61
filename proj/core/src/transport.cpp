#include "radiso/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/specfun.hpp"

namespace radiso {

namespace {

using numeric::kInf;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Log-log slope of g between two nodes and whether g moves monotonically in
// direction `sign` (+1 increasing with index, -1 decreasing) on [lo, hi].
struct Trend {
  double slope = 0.0;
  bool monotone = false;
};

Trend trend(std::span<const double> r, std::span<const double> log_g, std::size_t lo,
            std::size_t hi, int sign) {
  Trend t;
  if (hi <= lo + 1) return t;
  if (!std::isfinite(log_g[lo]) || !std::isfinite(log_g[hi]) || !(r[lo] > 0.0)) return t;
  t.slope = (log_g[hi] - log_g[lo]) / (std::log(r[hi]) - std::log(r[lo]));
  t.monotone = true;
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (sign * (log_g[i] - log_g[i - 1]) < -1e-9) {
      t.monotone = false;
      break;
    }
  }
  return t;
}

}  // namespace

TransportMap::TransportMap(RadialMeasure measure, TransportOptions options)
    : measure_(std::move(measure)), options_(options) {}

TransportMap TransportMap::build(const RadialMeasure& measure, const TransportOptions& options) {
  if (options.nodes < 16) throw DomainError("transport: need at least 16 grid nodes");
  if (!(options.cdf_floor > 0.0 && options.cdf_floor < 0.05)) {
    throw DomainError("transport: cdf floor must lie in (0, 0.05)");
  }
  if (auto gap = find_support_gap(measure.density())) {
    throw DisconnectedSupportError(
        measure.density().name() + ": support is not connected (f vanishes near r = " +
            csv::format(*gap) + ")",
        *gap);
  }
  TransportMap map(measure, options);
  const int n = measure.dimension();
  map.log_prefactor_ = 0.5 * n * std::log(2.0 * std::numbers::pi) - std::log(measure.mass());
  map.median_radius_ = measure.radius_at_mass(0.5);

  const int count = options.nodes;
  const double log_half = std::log(0.5);
  const double log_floor = std::log(options.cdf_floor);
  map.r_.resize(count);
  map.sigma_.resize(count);
  map.sigma_prime_.resize(count);
  map.mass_.resize(count);
  map.tail_.resize(count);
  std::optional<double> hint;
  for (int i = 0; i < count; ++i) {
    const double z = -1.0 + 2.0 * i / (count - 1);
    const double w = std::abs(z);
    const double small = std::exp((1.0 - w) * log_half + w * log_floor);
    double r, lower, upper;
    if (z <= 0.0) {
      lower = small;
      upper = 1.0 - small;
      r = measure.radius_at_mass(lower, hint);
    } else {
      upper = small;
      lower = 1.0 - small;
      r = measure.radius_at_tail(upper, hint);
    }
    hint = r;
    const double s = map.sigma_from_masses(lower, upper);
    map.r_[i] = r;
    map.sigma_[i] = s;
    map.sigma_prime_[i] = std::exp(map.log_sigma_prime(r, s));
    map.mass_[i] = lower;
    map.tail_[i] = upper;
  }
  map.estimate_lipschitz();
  return map;
}

double TransportMap::sigma_from_masses(double lower, double upper) const {
  const double a = 0.5 * dimension();
  if (lower <= 0.0) return 0.0;
  if (upper <= 0.0) return kInf;
  if (lower <= 0.5) return std::sqrt(2.0 * inv_reg_inc_gamma(a, lower));
  return std::sqrt(2.0 * inv_reg_inc_gamma_upper(a, upper));
}

double TransportMap::log_sigma_prime(double r, double sigma) const {
  const int n = dimension();
  double v = log_prefactor_ + measure_.density().log_value(r) + 0.5 * sigma * sigma;
  if (n > 1) v += (n - 1) * (std::log(r) - std::log(sigma));
  return v;
}

double TransportMap::sigma(double r) const {
  const auto& d = measure_.density();
  if (!(r > d.inner_radius())) return 0.0;
  if (r >= d.outer_radius()) return kInf;
  if (r <= median_radius_) {
    const double lower = measure_.cdf(r);
    return sigma_from_masses(lower, 1.0 - lower);
  }
  const double upper = measure_.tail(r);
  return sigma_from_masses(1.0 - upper, upper);
}

double TransportMap::sigma_prime(double r) const {
  const auto& d = measure_.density();
  if (!(r > d.inner_radius()) || !(r < d.outer_radius())) return numeric::kNaN;
  return std::exp(log_sigma_prime(r, sigma(r)));
}

std::optional<double> TransportMap::hint_radius(double t) const {
  if (!(t > sigma_.front() && t < sigma_.back())) return std::nullopt;
  const auto it = std::upper_bound(sigma_.begin(), sigma_.end(), t);
  const auto j = static_cast<std::size_t>(it - sigma_.begin());
  const double t0 = sigma_[j - 1], t1 = sigma_[j];
  const double h = t1 - t0;
  if (!(h > 0.0)) return r_[j - 1];
  // Cubic Hermite in t with slopes 1/sigma'.
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double d0 = 1.0 / sigma_prime_[j - 1], d1 = 1.0 / sigma_prime_[j];
  double guess = h00 * r_[j - 1] + h01 * r_[j];
  if (std::isfinite(d0) && std::isfinite(d1)) guess += h * (h10 * d0 + h11 * d1);
  return std::clamp(guess, r_[j - 1], r_[j]);
}

double TransportMap::inverse(double t) const {
  if (std::isnan(t)) throw DomainError("transport inverse: NaN argument");
  if (t <= 0.0) return measure_.density().inner_radius();
  if (t == kInf) return measure_.density().outer_radius();
  const int n = dimension();
  const double lower = gaussian_ball_mass(n, t);
  const auto hint = hint_radius(t);
  if (lower <= 0.5) return measure_.radius_at_mass(lower, hint);
  const double upper = gaussian_ball_tail(n, t);
  if (upper <= 0.0) {
    throw OutOfRangeError("transport inverse: Gaussian tail underflows at t = " + csv::format(t));
  }
  return measure_.radius_at_tail(upper, hint);
}

double TransportMap::inverse_derivative(double t) const {
  const double r = inverse(t);
  return std::exp(-log_sigma_prime(r, t));
}

double TransportMap::rho(double t) const {
  if (t > 0.0) return inverse(t) / t;
  if (measure_.density().inner_radius() > 0.0) return kInf;
  return r_.front() / sigma_.front();
}

std::vector<double> TransportMap::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw DimensionMismatchError("apply: vector length differs from the map dimension");
  }
  std::vector<double> out(x.size(), 0.0);
  const double t = norm(x);
  if (t == 0.0) return out;
  const double scale = inverse(t) / t;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
  return out;
}

std::vector<double> TransportMap::apply_sigma(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != dimension()) {
    throw DimensionMismatchError("apply_sigma: vector length differs from the map dimension");
  }
  std::vector<double> out(y.size(), 0.0);
  const double r = norm(y);
  const auto& d = measure_.density();
  if (!(r > d.inner_radius() && r < d.outer_radius())) return out;
  const double scale = sigma(r) / r;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = scale * y[i];
  return out;
}

JacobianSpectrum TransportMap::jacobian_spectrum(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw OutOfRangeError("jacobian_spectrum: radius must be positive and finite");
  }
  JacobianSpectrum js;
  const double r = inverse(t);
  js.radial = std::exp(-log_sigma_prime(r, t));
  js.tangential = r / t;
  js.tangential_multiplicity = dimension() - 1;
  if (!std::isfinite(js.radial) || !std::isfinite(js.tangential)) {
    throw OutOfRangeError("jacobian_spectrum: map not resolvable at t = " + csv::format(t));
  }
  return js;
}

void TransportMap::estimate_lipschitz() {
  LipschitzEstimate& est = lipschitz_;
  const std::size_t count = r_.size();
  std::vector<double> log_g(count);
  std::size_t argmax = 0;
  double best = -kInf;
  for (std::size_t i = 0; i < count; ++i) {
    log_g[i] = -std::log(sigma_prime_[i]);
    const double rho_i = std::log(r_[i]) - std::log(sigma_[i]);
    const double v = std::max(log_g[i], rho_i);
    if (std::isfinite(v) && v > best) {
      best = v;
      argmax = i;
    }
  }
  est.grid_sup = std::exp(best);
  est.argmax_radius = r_[argmax];

  const double decade = 10.0 * options_.cdf_floor;
  std::size_t lower_end = 0;
  while (lower_end + 1 < count && mass_[lower_end + 1] <= decade) ++lower_end;
  std::size_t upper_begin = count - 1;
  while (upper_begin > 0 && tail_[upper_begin - 1] <= decade) --upper_begin;
  const Trend low = trend(r_, log_g, 0, lower_end, -1);
  const Trend high = trend(r_, log_g, upper_begin, count - 1, +1);
  est.lower_slope = low.slope;
  est.upper_slope = high.slope;

  if (measure_.density().inner_radius() > 0.0) {
    est.reason = "inner-radius";
  } else if (est.grid_sup > options_.divergence_threshold) {
    est.reason = "threshold";
  } else if (high.monotone && high.slope > options_.trend_slope) {
    est.reason = "upper-trend";
  } else if (low.monotone && low.slope < -options_.trend_slope) {
    est.reason = "lower-trend";
  }
  if (!est.reason.empty()) {
    est.unbounded = true;
    est.value = kInf;
    return;
  }

  double value = est.grid_sup;
  if (argmax > 0 && argmax + 1 < count) {
    auto neg_g = [this](double r) {
      const double v = -std::exp(-log_sigma_prime(r, sigma(r)));
      return std::isfinite(v) ? v : 0.0;
    };
    const auto res =
        boost::math::tools::brent_find_minima(neg_g, r_[argmax - 1], r_[argmax + 1], 40);
    if (-res.second > value) {
      value = -res.second;
      est.argmax_radius = res.first;
    }
  }
  est.value = value;
}

void TransportMap::write_csv(const std::filesystem::path& path) const {
  static const std::array<std::string, 4> header{"r", "sigma", "sigma_prime", "rho"};
  csv::Writer out(path, header);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const std::array<double, 4> row{r_[i], sigma_[i], sigma_prime_[i], r_[i] / sigma_[i]};
    out.row(row);
  }
  out.close();
}

}  // namespace radiso
