#include "radiso/poincare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/random.hpp"
#include "radiso/specfun.hpp"

namespace radiso {

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void require_dim(const TransportMap& map, std::span<const double> x) {
  if (static_cast<int>(x.size()) != map.dimension()) {
    throw DimensionMismatchError("point dimension differs from the map dimension");
  }
}

// ln[(sigma/r)^{n-1} sigma'(r)] and sigma, or nullopt outside the image.
struct Jacobian {
  double log_value;
  double sigma;
};

std::optional<Jacobian> log_jacobian(const TransportMap& map, double r) {
  const auto& d = map.measure().density();
  const int n = map.dimension();
  if (r == 0.0 && d.inner_radius() == 0.0) {
    // sigma' (sigma/r)^{n-1} = (2pi)^{n/2} f e^{sigma^2/2} / M, with sigma(0) = 0.
    const double v = 0.5 * n * std::log(2.0 * std::numbers::pi) + d.log_value(0.0) -
                     std::log(map.measure().mass());
    if (!std::isfinite(v)) return std::nullopt;
    return Jacobian{v, 0.0};
  }
  if (!(r > d.inner_radius() && r < d.outer_radius())) return std::nullopt;
  const double s = map.sigma(r);
  if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
  const double sp = map.sigma_prime(r);
  if (!(sp > 0.0) || !std::isfinite(sp)) return std::nullopt;
  double v = std::log(sp);
  if (n > 1) v += (n - 1) * (std::log(s) - std::log(r));
  return Jacobian{v, s};
}

}  // namespace

double log_projection_prefactor(int n, double N) {
  if (n < 1 || !(N >= n + 1)) throw DomainError("projection prefactor: need N >= n + 1");
  // A_{N-n}/A_N = pi^{-n/2} Gamma(N/2) / Gamma((N-n)/2).
  const double ratio = boost::math::tgamma_delta_ratio(0.5 * (N - n), 0.5 * n);
  return -0.5 * n * std::log(std::numbers::pi) - std::log(ratio) - 0.5 * n * std::log(N);
}

double limit_density_radial(const TransportMap& map, double r) {
  const auto j = log_jacobian(map, r);
  if (!j) return 0.0;
  const int n = map.dimension();
  return std::exp(-0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * j->sigma * j->sigma +
                  j->log_value);
}

double limit_density(const TransportMap& map, std::span<const double> x) {
  require_dim(map, x);
  return limit_density_radial(map, norm(x));
}

double finite_N_density_radial(const TransportMap& map, double r, long N) {
  const int n = map.dimension();
  const double pre = log_projection_prefactor(n, static_cast<double>(N));
  const auto j = log_jacobian(map, r);
  if (!j) return 0.0;
  const double u = j->sigma * j->sigma / static_cast<double>(N);
  if (u >= 1.0) return 0.0;
  return std::exp(pre + 0.5 * static_cast<double>(N - n - 2) * std::log1p(-u) + j->log_value);
}

double finite_N_density(const TransportMap& map, std::span<const double> x, long N) {
  require_dim(map, x);
  return finite_N_density_radial(map, norm(x), N);
}

std::vector<DiagnosticRow> convergence_diagnostic(const TransportMap& map,
                                                  std::span<const long> N_list,
                                                  std::span<const double> radii) {
  const int n = map.dimension();
  const double area = sphere_constants(n).surface;
  const auto nodes = map.grid_radii();
  std::vector<DiagnosticRow> rows;
  for (long N : N_list) {
    DiagnosticRow row;
    row.N = N;
    for (double r : radii) {
      const double e =
          std::abs(finite_N_density_radial(map, std::abs(r), N) - limit_density_radial(map, std::abs(r)));
      row.sup_error = std::max(row.sup_error, e);
    }
    // f_{n,N} vanishes beyond s_1(sqrt N); split the quadrature there.
    std::vector<double> cuts;
    for (std::size_t i = 0; i < nodes.size(); i += 4) cuts.push_back(nodes[i]);
    cuts.push_back(nodes.back());
    double edge = numeric::kInf;
    try {
      edge = map.inverse(std::sqrt(static_cast<double>(N)));
    } catch (const OutOfRangeError&) {
    }
    if (edge > cuts.front() && edge < cuts.back()) cuts.push_back(edge);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double pre = log_projection_prefactor(n, static_cast<double>(N));
    const double log_gauss = -0.5 * n * std::log(2.0 * std::numbers::pi);
    auto integrand = [&](double r) {
      const auto j = log_jacobian(map, r);
      if (!j) return 0.0;
      const double u = j->sigma * j->sigma / static_cast<double>(N);
      const double limit = std::exp(log_gauss - 0.5 * j->sigma * j->sigma + j->log_value);
      const double finite =
          u < 1.0 ? std::exp(pre + 0.5 * static_cast<double>(N - n - 2) * std::log1p(-u) +
                             j->log_value)
                  : 0.0;
      return area * std::abs(finite - limit) * (n > 1 ? std::pow(r, n - 1) : 1.0);
    };
    numeric::QuadratureOptions quad{1e-9, 8};
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      l1 += numeric::integrate(integrand, cuts[i], cuts[i + 1], quad);
    }
    row.l1_error = l1;
    rows.push_back(row);
  }
  return rows;
}

void write_diagnostics_csv(const std::filesystem::path& path, std::span<const DiagnosticRow> rows) {
  static const std::array<std::string, 3> header{"N", "sup_error", "l1_error"};
  csv::Writer out(path, header);
  for (const auto& r : rows) {
    const std::array<double, 3> v{static_cast<double>(r.N), r.sup_error, r.l1_error};
    out.row(v);
  }
  out.close();
}

SampleBatch sample_pushforward(const TransportMap& map, long N, std::size_t count,
                               std::uint64_t seed) {
  const int n = map.dimension();
  if (!(N >= n + 1)) throw DomainError("sample_pushforward: need N >= n + 1");
  if (count < 1) throw DomainError("sample_pushforward: count must be positive");
  SampleBatch batch;
  batch.n = n;
  batch.N = N;
  batch.seed = seed;
  batch.count = count;
  batch.points.resize(count * static_cast<std::size_t>(n));
  batch.radial_sorted.resize(count);
  const double sqrtN = std::sqrt(static_cast<double>(N));
  const auto rest = static_cast<std::uint64_t>(N - n);
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < count; ++i) {
    double head = 0.0, total = 0.0;
    for (std::uint32_t attempt = 0;; ++attempt) {
      random::Stream stream(seed, i, attempt);
      head = 0.0;
      for (int k = 0; k < n; ++k) {
        xi[k] = stream.normal();
        head += xi[k] * xi[k];
      }
      total = head + stream.sum_of_squares(rest);
      if (total >= 1e-200) break;
      if (attempt == 1) {
        throw DegenerateDrawError("sample " + std::to_string(i) + ": normal vector has norm below 1e-100");
      }
    }
    const double scale = sqrtN / std::sqrt(total);
    const double t = std::sqrt(head) * scale;
    double* out = batch.points.data() + i * n;
    if (t == 0.0) {
      std::fill(out, out + n, 0.0);
      batch.radial_sorted[i] = 0.0;
      continue;
    }
    const double r = map.inverse(t);
    const double factor = scale * r / t;
    for (int k = 0; k < n; ++k) out[k] = xi[k] * factor;
    batch.radial_sorted[i] = r;
  }
  std::sort(batch.radial_sorted.begin(), batch.radial_sorted.end());
  return batch;
}

void write_batch_csv(const std::filesystem::path& path, const SampleBatch& batch) {
  std::vector<std::string> header;
  for (int k = 1; k <= batch.n; ++k) header.push_back("x" + std::to_string(k));
  csv::Writer out(path, header);
  for (std::size_t i = 0; i < batch.count; ++i) out.row(batch.point(i));
  out.close();
}

double ks_statistic(std::span<const double> sorted, const RadialMeasure& measure) {
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = measure.cdf(sorted[i]);
    d = std::max({d, (i + 1) / m - F, F - i / m});
  }
  return d;
}

double ks_statistic(const SampleBatch& batch, const RadialMeasure& measure) {
  if (batch.n != measure.dimension()) {
    throw DimensionMismatchError("ks_statistic: batch and measure dimensions differ");
  }
  return ks_statistic(batch.radial_sorted, measure);
}

double ks_critical_value(std::size_t m, double alpha) {
  if (m == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("ks_critical_value: need m >= 1 and 0 < alpha < 1");
  }
  return std::sqrt(-0.5 * std::log(0.5 * alpha)) / std::sqrt(static_cast<double>(m));
}

OrthantTest orthant_chi_square(const SampleBatch& batch) {
  OrthantTest t;
  t.cells = 1 << batch.n;
  std::vector<double> counts(t.cells, 0.0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < batch.count; ++i) {
    const auto x = batch.point(i);
    if (norm(x) == 0.0) continue;
    int cell = 0;
    for (int k = 0; k < batch.n; ++k) cell |= (x[k] < 0.0 ? 1 : 0) << k;
    counts[cell] += 1.0;
    ++used;
  }
  const double expected = static_cast<double>(used) / t.cells;
  for (double c : counts) t.statistic += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(t.cells - 1);
  t.p_value = boost::math::cdf(boost::math::complement(dist, t.statistic));
  return t;
}

}  // namespace radiso
