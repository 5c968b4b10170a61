#pragma once

// Finite-N projections of the uniform measure on the sphere of radius sqrt(N),
// pushed forward by s_n, and their limit density.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "radiso/transport.hpp"

namespace radiso {

// ln( A_{N-n} / (N^{n/2} A_N) ).
double log_projection_prefactor(int n, double N);

// (2pi)^{-n/2} e^{-sigma^2/2} (sigma/|x|)^{n-1} sigma'(|x|) on the image of the map, 0 elsewhere.
double limit_density(const TransportMap& map, std::span<const double> x);
double limit_density_radial(const TransportMap& map, double r);

// A_{N-n}/(N^{n/2} A_N) (1 - sigma^2/N)^{(N-n-2)/2} (sigma/|x|)^{n-1} sigma'(|x|), 0 where
// sigma(|x|)^2 >= N. Throws DomainError unless N >= n + 1.
double finite_N_density(const TransportMap& map, std::span<const double> x, long N);
double finite_N_density_radial(const TransportMap& map, double r, long N);

struct DiagnosticRow {
  long N = 0;
  double sup_error = 0.0;  // over the supplied radii
  double l1_error = 0.0;   // int_{R^n} |f_{n,N} - f_n| dx
};

std::vector<DiagnosticRow> convergence_diagnostic(const TransportMap& map,
                                                  std::span<const long> N_list,
                                                  std::span<const double> radii);
void write_diagnostics_csv(const std::filesystem::path& path, std::span<const DiagnosticRow> rows);

struct SampleBatch {
  int n = 0;
  long N = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<double> points;  // row-major, count x n
  std::vector<double> radial_sorted;

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(points).subspan(i * n, n);
  }
};

// Sample i uses the counter stream (seed, i): N standard normals, rescaled to
// the sphere of radius sqrt(N), first n coordinates mapped by s_n.
// Throws DegenerateDrawError if a draw has norm below 1e-100 twice in a row.
SampleBatch sample_pushforward(const TransportMap& map, long N, std::size_t count,
                               std::uint64_t seed);

void write_batch_csv(const std::filesystem::path& path, const SampleBatch& batch);

// sup_r |empirical CDF of |points| - F_n(r)|.
double ks_statistic(const SampleBatch& batch, const RadialMeasure& measure);
double ks_statistic(std::span<const double> sorted_radii, const RadialMeasure& measure);
// Asymptotic one-sample critical value sqrt(-ln(alpha/2)/2) / sqrt(m).
double ks_critical_value(std::size_t m, double alpha);

struct OrthantTest {
  double statistic = 0.0;
  int cells = 0;
  double p_value = 1.0;
};
// Chi-square test of uniform occupancy of the 2^n coordinate orthants.
OrthantTest orthant_chi_square(const SampleBatch& batch);

}  // namespace radiso
