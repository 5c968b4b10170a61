#include "radiso/phiexp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/numeric.hpp"

namespace radiso {

namespace {

using numeric::kInf;

constexpr double kVMin = -740.0;
constexpr double kVMax = 705.0;
constexpr double kVStep = 0.125;

double ln_q(double q, double t) {
  if (q == 1.0) return std::log(t);
  return std::expm1((1.0 - q) * std::log(t)) / (1.0 - q);
}

double log_exp_q(double q, double tau) {
  if (q == 1.0) return tau;
  const double base = 1.0 + (1.0 - q) * tau;
  if (base <= 0.0) return q < 1.0 ? -kInf : kInf;
  return std::log1p((1.0 - q) * tau) / (1.0 - q);
}

}  // namespace

double exp_q(double q, double tau) {
  if (!(q > 0.0)) throw DomainError("exp_q: q must be positive");
  if (q == 1.0) return std::exp(tau);
  const double base = 1.0 + (1.0 - q) * tau;
  if (base <= 0.0) return q < 1.0 ? 0.0 : kInf;
  return std::exp(std::log(base) / (1.0 - q));
}

// Cumulative J(v) = ln_phi(e^v) on a uniform v grid; J(0) = 0.
struct PhiFunction::LogTable {
  std::vector<double> v;
  std::vector<double> J;
  std::function<double(double)> g;  // e^u / phi(e^u)
  double exponent_low = 0.0;        // local exponent of phi at 0
  double exponent_high = 0.0;       // and at infinity
};

PhiFunction PhiFunction::power(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("power phi: q must be positive");
  PhiFunction f;
  f.kind_ = Kind::Power;
  f.q_ = q;
  f.name_ = q == 1.0 ? "identity" : "power:q=" + csv::format(q);
  f.phi_ = [q](double s) { return q == 1.0 ? s : std::pow(s, q); };
  f.l_ = q < 1.0 ? -1.0 / (1.0 - q) : -kInf;
  f.L_ = q > 1.0 ? 1.0 / (q - 1.0) : kInf;
  f.theta_ = f.delta_ = q;
  return f;
}

PhiFunction PhiFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("poly phi: no coefficients");
  int lo = -1, hi = -1;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!(coeffs[k] >= 0.0) || !std::isfinite(coeffs[k])) {
      throw DomainError("poly phi: coefficients must be finite and nonnegative");
    }
    if (coeffs[k] > 0.0) {
      if (lo < 0) lo = static_cast<int>(k);
      hi = static_cast<int>(k);
    }
  }
  if (lo < 0) throw DomainError("poly phi: at least one coefficient must be positive");
  PhiFunction f;
  f.kind_ = Kind::Polynomial;
  f.name_ = "poly:";
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    f.name_ += (k ? "," : "") + csv::format(coeffs[k]);
  }
  f.phi_ = [c = std::move(coeffs)](double s) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
    return acc;
  };
  f.theta_ = hi;
  f.delta_ = lo;
  auto t = std::make_shared<LogTable>();
  t->exponent_low = lo;
  t->exponent_high = hi;
  f.table_ = t;
  f.finish_numeric();
  return f;
}

PhiFunction PhiFunction::tabulated(std::vector<double> s, std::vector<double> phi) {
  if (s.size() != phi.size() || s.size() < 2) {
    throw DomainError("tabulated phi: need at least two (s, phi) pairs");
  }
  std::vector<double> ls(s.size()), lp(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || !(phi[i] > 0.0) || !std::isfinite(s[i]) || !std::isfinite(phi[i])) {
      throw DomainError("tabulated phi: s and phi must be positive and finite");
    }
    if (i && !(s[i] > s[i - 1])) throw DomainError("tabulated phi: s must be strictly increasing");
    if (i && phi[i] < phi[i - 1]) throw DomainError("tabulated phi: phi must be nondecreasing");
    ls[i] = std::log(s[i]);
    lp[i] = std::log(phi[i]);
  }
  std::vector<double> slope(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    slope[i] = (lp[i + 1] - lp[i]) / (ls[i + 1] - ls[i]);
  }
  PhiFunction f;
  f.kind_ = Kind::Tabulated;
  f.name_ = "table";
  f.theta_ = *std::max_element(slope.begin(), slope.end());
  f.delta_ = *std::min_element(slope.begin(), slope.end());
  f.phi_ = [ls, lp, slope](double x) {
    const double lx = std::log(x);
    std::size_t j;
    if (lx <= ls.front()) {
      j = 0;
    } else if (lx >= ls.back()) {
      j = slope.size() - 1;
    } else {
      j = static_cast<std::size_t>(std::upper_bound(ls.begin(), ls.end(), lx) - ls.begin()) - 1;
    }
    return std::exp(lp[j] + slope[j] * (lx - ls[j]));
  };
  auto t = std::make_shared<LogTable>();
  t->exponent_low = slope.front();
  t->exponent_high = slope.back();
  f.table_ = t;
  f.finish_numeric();
  return f;
}

PhiFunction PhiFunction::from_csv(const std::filesystem::path& path) {
  static const std::array<std::string, 2> header{"s", "phi"};
  const auto table = csv::read(path, header);
  std::vector<double> s, phi;
  for (const auto& row : table.rows) {
    s.push_back(row[0]);
    phi.push_back(row[1]);
  }
  try {
    auto f = tabulated(std::move(s), std::move(phi));
    f.name_ = "table:" + path.string();
    return f;
  } catch (const DomainError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

PhiFunction PhiFunction::from_function(std::string name, std::function<double(double)> phi) {
  if (!phi) throw DomainError("phi: empty function");
  PhiFunction f;
  f.kind_ = Kind::User;
  f.name_ = std::move(name);
  f.phi_ = std::move(phi);
  // Forward difference quotients of s phi'(s) / phi(s) on [1e-8, 1e8].
  constexpr int kPoints = 1601;
  constexpr double h = 1e-7;
  double hi = -kInf, lo = kInf;
  for (int i = 0; i < kPoints; ++i) {
    const double s = std::pow(10.0, -8.0 + 16.0 * i / (kPoints - 1));
    const double p0 = f.phi_(s);
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
      throw DomainError(f.name_ + ": phi must be positive and finite on (0, inf)");
    }
    const double e = (f.phi_(s * (1.0 + h)) - p0) / (h * p0);
    hi = std::max(hi, e);
    lo = std::min(lo, e);
  }
  f.theta_ = hi;
  f.delta_ = lo;
  auto t = std::make_shared<LogTable>();
  auto local = [&f](double s) { return std::log(f.phi_(2.0 * s) / f.phi_(s)) / std::log(2.0); };
  t->exponent_low = local(1e-12);
  t->exponent_high = local(1e12);
  f.table_ = t;
  f.finish_numeric();
  return f;
}

void PhiFunction::finish_numeric() {
  auto t = std::make_shared<LogTable>(*table_);
  const auto phi = phi_;
  t->g = [phi](double u) {
    const double s = std::exp(u);
    const double p = phi(s);
    if (!(p > 0.0)) return kInf;
    const double v = s / p;
    return std::isfinite(v) ? v : 0.0;
  };
  const int count = static_cast<int>(std::lround((kVMax - kVMin) / kVStep)) + 1;
  t->v.resize(count);
  t->J.resize(count);
  const int zero = static_cast<int>(std::lround(-kVMin / kVStep));
  for (int k = 0; k < count; ++k) t->v[k] = kVMin + kVStep * k;
  t->v[zero] = 0.0;
  t->J[zero] = 0.0;
  for (int k = zero + 1; k < count; ++k) {
    t->J[k] = t->J[k - 1] + numeric::integrate(t->g, t->v[k - 1], t->v[k]);
  }
  for (int k = zero; k-- > 0;) {
    t->J[k] = t->J[k + 1] - numeric::integrate(t->g, t->v[k], t->v[k + 1]);
  }
  // Beyond the table phi follows its end power laws, so the remaining
  // integral of e^{u(1-e)} is explicit.
  const double e0 = t->exponent_low, e1 = t->exponent_high;
  l_ = e0 < 1.0 ? t->J.front() - t->g(t->v.front()) / (1.0 - e0) : -kInf;
  L_ = e1 > 1.0 ? t->J.back() + t->g(t->v.back()) / (e1 - 1.0) : kInf;
  table_ = std::move(t);
}

double PhiFunction::ln_phi(double t) const {
  if (!(t > 0.0)) {
    if (t == 0.0) return l_;
    throw DomainError("ln_phi: argument must be positive");
  }
  if (t == 1.0) return 0.0;
  if (std::isinf(t)) return L_;
  if (kind_ == Kind::Power) return ln_q(q_, t);
  const auto& tb = *table_;
  const double v = std::log(t);
  if (v <= tb.v.front()) {
    const double e0 = tb.exponent_low;
    const double g0 = tb.g(tb.v.front());
    return tb.J.front() - g0 * (1.0 - std::exp((v - tb.v.front()) * (1.0 - e0))) / (1.0 - e0);
  }
  if (v >= tb.v.back()) {
    const double e1 = tb.exponent_high;
    const double g1 = tb.g(tb.v.back());
    if (e1 == 1.0) return tb.J.back() + g1 * (v - tb.v.back());
    return tb.J.back() + g1 * std::expm1((v - tb.v.back()) * (1.0 - e1)) / (1.0 - e1);
  }
  const auto k = static_cast<std::size_t>((v - kVMin) / kVStep);
  const std::size_t j = std::min(k, tb.v.size() - 2);
  return tb.J[j] + numeric::integrate(tb.g, tb.v[j], v);
}

double PhiFunction::log_inverse(double tau) const {
  const auto& tb = *table_;
  if (tau < tb.J.front()) {
    const double e0 = tb.exponent_low;
    const double g0 = tb.g(tb.v.front());
    return tb.v.front() + std::log1p(-(tb.J.front() - tau) * (1.0 - e0) / g0) / (1.0 - e0);
  }
  if (tau >= tb.J.back()) {
    const double e1 = tb.exponent_high;
    const double g1 = tb.g(tb.v.back());
    if (e1 == 1.0) return tb.v.back() + (tau - tb.J.back()) / g1;
    return tb.v.back() + std::log1p((tau - tb.J.back()) * (1.0 - e1) / g1) / (1.0 - e1);
  }
  const auto it = std::upper_bound(tb.J.begin(), tb.J.end(), tau);
  const auto j = static_cast<std::size_t>(it - tb.J.begin()) - 1;
  const double a = tb.v[j], b = tb.v[j + 1];
  auto h = [&](double v) { return tb.J[j] + numeric::integrate(tb.g, a, v) - tau; };
  return numeric::solve_increasing(h, tb.g, a, b, 0.5 * (a + b), 1e-15);
}

double PhiFunction::log_exp_phi(double tau) const {
  if (std::isnan(tau)) throw DomainError("exp_phi: NaN argument");
  if (tau <= l_) return -kInf;
  if (tau >= L_) return kInf;
  if (tau == 0.0) return 0.0;
  if (kind_ == Kind::Power) return log_exp_q(q_, tau);
  return log_inverse(tau);
}

double PhiFunction::exp_phi(double tau) const {
  if (kind_ == Kind::Power) {
    if (std::isnan(tau)) throw DomainError("exp_phi: NaN argument");
    return exp_q(q_, tau);
  }
  return std::exp(log_exp_phi(tau));
}

ThetaDelta theta_delta(const PhiFunction& phi) { return {phi.theta(), phi.delta()}; }

RadialDensity phi_p_density(const PhiFunction& phi, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("phi_p: p must be positive");
  const double outer = std::isfinite(phi.l()) ? std::pow(-p * phi.l(), 1.0 / p) : kInf;
  auto f = [phi, p](double r) { return phi.exp_phi(-std::pow(r, p) / p); };
  auto log_f = [phi, p](double r) { return phi.log_exp_phi(-std::pow(r, p) / p); };
  std::string name = phi.kind() == PhiFunction::Kind::Power && !phi.is_identity()
                         ? "q-exp:q=" + csv::format(phi.theta()) + ",p=" + csv::format(p)
                         : "phi_p[" + phi.name() + "],p=" + csv::format(p);
  return RadialDensity::from_function(std::move(name), f, log_f, 0.0, outer, {}, 1.0);
}

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::Yes:
      return "yes";
    case Tristate::No:
      return "no";
    case Tristate::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

PhiPClassification classify(const PhiFunction& phi, double p, int n) {
  if (!(p > 0.0)) throw DomainError("classify: p must be positive");
  if (n < 1) throw DomainError("classify: dimension must be >= 1");
  PhiPClassification c;
  c.theta = phi.theta();
  c.delta = phi.delta();
  c.R_phi = std::isfinite(phi.l()) ? std::pow(-p * phi.l(), 1.0 / p) : kInf;
  const double critical = (n + p) / n;
  c.integrable = std::isfinite(phi.l()) || c.theta < critical;
  if (!c.integrable) {
    c.which_clause = "not-integrable";
    return c;
  }
  if (c.theta < 1.0) {
    c.lipschitz = Tristate::Yes;
    c.which_clause = "2i";
  } else if (phi.is_identity()) {
    c.lipschitz = p >= 2.0 ? Tristate::Yes : Tristate::No;
    c.which_clause = "identity-p";
  } else if (c.delta >= 1.0 && c.theta > 1.0 && c.theta < critical &&
             (c.theta - c.delta) / (c.theta - 1.0) <= 1.0 / p) {
    c.lipschitz = Tristate::No;
    c.which_clause = "2ii";
  } else {
    c.which_clause = "none";
  }
  return c;
}

}  // namespace radiso
