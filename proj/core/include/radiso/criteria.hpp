#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radiso/radial.hpp"

namespace radiso {

class TransportMap;

using PsiFunction = std::function<double(double)>;

struct TailWindow {
  // Tail masses 1 - F_n(r) from `upper` down to `lower`, log-spaced.
  double upper = 1e-2;
  double lower = 1e-10;
  int points = 200;
};

struct BCheckResult {
  std::string psi_description;
  bool b1 = false;
  // Largest lambda on a 1e-3 grid with lambda f psi r^{n-1} <= tail <= f psi r^{n-1} / lambda.
  double lambda = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  bool b2 = false;
  // Running infimum of psi^2 ln(f psi r^{n-1}) over the whole window and its first half.
  double b2_liminf = 0.0;
  double b2_first_half = 0.0;
};

BCheckResult check_b(const RadialMeasure& measure, const PsiFunction& psi,
                     std::string psi_description = "user", const TailWindow& window = {});
BCheckResult check_b(const RadialDensity& density, int n, const PsiFunction& psi,
                     std::string psi_description = "user");

struct LogConcavityReport {
  bool phi2_positive = false;   // lim Phi'' in (0, inf]
  bool phi1_unbounded = false;  // lim Phi' = inf
  bool ratio_bounded = false;   // lim sup Phi'' / Phi'^2 < inf
  double phi1_last = 0.0;
  double phi2_last = 0.0;
  double ratio_last = 0.0;
  double phi1_slope = 0.0;
  double phi2_slope = 0.0;
  double ratio_slope = 0.0;
  bool pass() const noexcept { return phi2_positive && phi1_unbounded && ratio_bounded; }
  // psi = 1 / Phi' by central differences; set only on pass.
  PsiFunction psi;
};

// Finite-difference study of Phi = -ln f over the tail window.
// Throws NonSmoothDensityError when the h and 2h second differences disagree.
LogConcavityReport check_logcvx(const RadialMeasure& measure, const TailWindow& window = {});
LogConcavityReport check_logcvx(const RadialDensity& density, int n);

enum class Verdict { Lipschitz, NotLipschitz, Inconclusive };
std::string to_string(Verdict v);

struct CriteriaReport {
  ConditionAReport cond_a;
  BCheckResult cond_b;
  std::optional<LogConcavityReport> logcvx;
  std::string logcvx_error;  // set when check_logcvx threw
  Verdict verdict = Verdict::Inconclusive;
  std::string basis;  // which rule produced the verdict
  std::optional<double> transport_L;

  std::string to_text() const;
};

struct VerdictOptions {
  std::optional<PsiFunction> psi;
  std::string psi_description = "user";
  TailWindow window;
  // Cross-validated against L when given.
  const TransportMap* transport = nullptr;
};

// Throws PreconditionError when lim sup_{r -> 0} f(r) is infinite.
CriteriaReport prop_lip_verdict(const RadialMeasure& measure, const VerdictOptions& options = {});
CriteriaReport prop_lip_verdict(const RadialDensity& density, int n);

// Per-radius diagnostics over the tail window: r,tail,ratio,b2_term.
void write_b_diagnostics(const std::filesystem::path& path, const RadialMeasure& measure,
                         const PsiFunction& psi, const TailWindow& window = {});

}  // namespace radiso
