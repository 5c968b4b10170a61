#pragma once

// Deformed logarithms ln_phi(t) = int_1^t ds / phi(s), their inverses exp_phi,
// and the radial family phi_p(r) = exp_phi(-r^p / p).

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "radiso/radial.hpp"

namespace radiso {

class PhiFunction {
 public:
  enum class Kind { Power, Polynomial, Tabulated, User };

  // phi(s) = s^q; q = 1 is the identity.
  static PhiFunction power(double q);
  static PhiFunction identity() { return power(1.0); }
  // phi(s) = sum_k coeffs[k] s^k with nonnegative coefficients, at least one positive.
  static PhiFunction polynomial(std::vector<double> coeffs);
  // Positive nondecreasing samples, interpolated linearly in log-log
  // coordinates and extended by the end power laws.
  static PhiFunction tabulated(std::vector<double> s, std::vector<double> phi);
  // CSV with header "s,phi".
  static PhiFunction from_csv(const std::filesystem::path& path);
  static PhiFunction from_function(std::string name, std::function<double(double)> phi);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  bool is_identity() const noexcept { return kind_ == Kind::Power && q_ == 1.0; }

  double operator()(double s) const { return phi_(s); }

  double ln_phi(double t) const;
  // 0 for tau <= l, inf for tau >= L, ln_phi^{-1}(tau) in between.
  double exp_phi(double tau) const;
  // ln exp_phi(tau), finite wherever exp_phi is positive and finite.
  double log_exp_phi(double tau) const;

  double l() const noexcept { return l_; }        // lim_{t -> 0} ln_phi(t)
  double L() const noexcept { return L_; }        // lim_{t -> inf} ln_phi(t)
  double theta() const noexcept { return theta_; }  // sup s phi'(s) / phi(s)
  double delta() const noexcept { return delta_; }  // inf s phi'(s) / phi(s)

 private:
  PhiFunction() = default;
  struct LogTable;
  void finish_numeric();
  double log_inverse(double tau) const;  // v with ln_phi(e^v) = tau, l < tau < L

  Kind kind_ = Kind::User;
  std::string name_;
  double q_ = 1.0;
  std::function<double(double)> phi_;
  double l_ = 0.0, L_ = 0.0, theta_ = 0.0, delta_ = 0.0;
  std::shared_ptr<const LogTable> table_;
};

// [1 + (1 - q) tau]_+^{1/(1-q)}, with exp_1 = exp and 0^{negative} = inf.
double exp_q(double q, double tau);

struct ThetaDelta {
  double theta;
  double delta;
};
ThetaDelta theta_delta(const PhiFunction& phi);

// f(r) = exp_phi(-r^p / p) on [0, R_phi] with R_phi = (-p l_phi)^{1/p}.
RadialDensity phi_p_density(const PhiFunction& phi, double p);

enum class Tristate { Yes, No, Inconclusive };
std::string to_string(Tristate t);

struct PhiPClassification {
  bool integrable = false;
  Tristate lipschitz = Tristate::Inconclusive;
  // "2i", "2ii", "identity-p", "not-integrable" or "none".
  std::string which_clause;
  double R_phi = 0.0;
  double theta = 0.0;
  double delta = 0.0;
};

PhiPClassification classify(const PhiFunction& phi, double p, int n);

}  // namespace radiso
