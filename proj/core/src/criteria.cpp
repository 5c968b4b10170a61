#include "radiso/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/transport.hpp"

namespace radiso {

namespace {

using numeric::kInf;

std::vector<double> window_radii(const RadialMeasure& measure, const TailWindow& w,
                                 std::vector<double>* tails = nullptr) {
  if (!(w.upper > w.lower && w.lower > 0.0 && w.upper < 1.0) || w.points < 4) {
    throw DomainError("tail window: need 0 < lower < upper < 1 and at least 4 points");
  }
  std::vector<double> radii;
  radii.reserve(w.points);
  std::optional<double> hint;
  const double lu = std::log(w.upper), ll = std::log(w.lower);
  for (int k = 0; k < w.points; ++k) {
    const double q = std::exp(lu + (ll - lu) * k / (w.points - 1));
    const double r = measure.radius_at_tail(q, hint);
    hint = r;
    radii.push_back(r);
    if (tails) tails->push_back(q);
  }
  return radii;
}

// Finite differences are taken on the scale of the distance to the far end
// of the support: r itself when R_f is infinite, R_f - r otherwise.
double local_scale(const RadialDensity& d, double r) {
  return std::isfinite(d.outer_radius()) ? d.outer_radius() - r : r;
}

double slope_coordinate(const RadialDensity& d, double r) {
  return std::isfinite(d.outer_radius()) ? -std::log(d.outer_radius() - r) : std::log(r);
}

struct Derivs {
  double d1 = 0.0;
  double d2 = 0.0;
};

Derivs phi_derivs(const RadialDensity& d, double r, double h) {
  const double p0 = -d.log_value(r);
  const double pp = -d.log_value(r + h);
  const double pm = -d.log_value(r - h);
  return {(pp - pm) / (2.0 * h), (pp - 2.0 * p0 + pm) / (h * h)};
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

PsiFunction inverse_phi_prime(const RadialDensity& d, double rel_step) {
  return [d, rel_step](double r) {
    const double h = rel_step * local_scale(d, r);
    return 1.0 / phi_derivs(d, r, h).d1;
  };
}

constexpr double kTrendSlope = 0.05;

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Lipschitz:
      return "LIPSCHITZ";
    case Verdict::NotLipschitz:
      return "NOT_LIPSCHITZ";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

BCheckResult check_b(const RadialMeasure& measure, const PsiFunction& psi,
                     std::string psi_description, const TailWindow& window) {
  BCheckResult res;
  res.psi_description = std::move(psi_description);
  const auto radii = window_radii(measure, window);
  const auto& d = measure.density();
  const int n = measure.dimension();
  res.r_min = radii.front();
  res.r_max = radii.back();

  double worst = 0.0;  // max |ln q|
  bool valid = true;
  double inf_first = kInf, inf_full = kInf;
  const std::size_t half = radii.size() / 2;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    const double p = psi(r);
    const double log_base = d.log_value(r) + std::log(p) + (n - 1) * std::log(r);
    const double log_tail = std::log(measure.tail_integral(r));
    if (!(p > 0.0) || !std::isfinite(log_base) || !std::isfinite(log_tail)) {
      valid = false;
      break;
    }
    worst = std::max(worst, std::abs(log_tail - log_base));
    const double term = p * p * log_base;
    inf_full = std::min(inf_full, term);
    if (k < half) inf_first = inf_full;
  }
  if (!valid) return res;

  const double lambda_max = std::exp(-worst);
  res.lambda = std::min(0.999, std::floor(lambda_max * 1000.0) / 1000.0);
  res.b1 = res.lambda >= 1e-3;
  res.b2_liminf = inf_full;
  res.b2_first_half = inf_first;
  const double change = std::abs(inf_full - inf_first) / std::max(std::abs(inf_first), 1e-300);
  res.b2 = inf_full > -1e6 && (inf_full == inf_first || change < 0.05);
  return res;
}

BCheckResult check_b(const RadialDensity& density, int n, const PsiFunction& psi,
                     std::string psi_description) {
  return check_b(RadialMeasure(density, n), psi, std::move(psi_description));
}

LogConcavityReport check_logcvx(const RadialMeasure& measure, const TailWindow& window) {
  const auto& d = measure.density();
  const auto radii = window_radii(measure, window);
  LogConcavityReport rep;
  std::vector<double> x, l1, l2, lratio;
  bool positive1 = true, positive2 = true;
  const std::size_t half = radii.size() / 2;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    const double s = local_scale(d, r);
    const double h = 1e-4 * s;
    const Derivs a = phi_derivs(d, r, h);
    const Derivs b = phi_derivs(d, r, 2.0 * h);
    const double ref = std::max(std::abs(a.d2), std::abs(a.d1) / s);
    if (!std::isfinite(a.d2) || !std::isfinite(b.d2) || std::abs(a.d2 - b.d2) > 1e-3 * ref) {
      throw NonSmoothDensityError(d.name() + ": second differences of ln f disagree near r = " +
                                  csv::format(r));
    }
    rep.phi1_last = a.d1;
    rep.phi2_last = a.d2;
    if (!(a.d1 > 0.0)) positive1 = false;
    // Phi'' indistinguishable from zero counts as a failure of lim Phi'' > 0.
    if (k >= half && !(a.d2 > 1e-6 * std::abs(a.d1) / s)) positive2 = false;
    if (!positive1 || !(a.d2 > 0.0)) {
      positive2 = positive2 && a.d2 > 0.0;
      continue;
    }
    x.push_back(slope_coordinate(d, r));
    l1.push_back(std::log(a.d1));
    l2.push_back(std::log(a.d2));
    lratio.push_back(std::log(a.d2) - 2.0 * std::log(a.d1));
  }
  rep.ratio_last = rep.phi2_last / (rep.phi1_last * rep.phi1_last);
  if (x.size() == radii.size()) {
    rep.phi1_slope = ls_slope(x, l1);
    rep.phi2_slope = ls_slope(x, l2);
    rep.ratio_slope = ls_slope(x, lratio);
    rep.phi2_positive = positive2 && rep.phi2_slope >= -kTrendSlope;
    rep.phi1_unbounded = positive1 && rep.phi1_slope > kTrendSlope;
    rep.ratio_bounded = rep.ratio_slope <= kTrendSlope;
  } else {
    rep.phi1_unbounded = positive1;
  }
  if (rep.pass()) rep.psi = inverse_phi_prime(measure.density(), 1e-4);
  return rep;
}

LogConcavityReport check_logcvx(const RadialDensity& density, int n) {
  return check_logcvx(RadialMeasure(density, n));
}

CriteriaReport prop_lip_verdict(const RadialMeasure& measure, const VerdictOptions& options) {
  const auto& d = measure.density();
  if (!std::isfinite(d.f0_limsup())) {
    throw PreconditionError(d.name() + ": lim sup of f at 0 is not finite");
  }
  CriteriaReport rep;
  rep.cond_a = check_condition_a(d);

  PsiFunction psi;
  std::string psi_name;
  try {
    rep.logcvx = check_logcvx(measure, options.window);
    if (rep.logcvx->pass()) {
      psi = rep.logcvx->psi;
      psi_name = "1/Phi' (log-concavity certified)";
    }
  } catch (const NonSmoothDensityError& e) {
    rep.logcvx_error = e.what();
  }
  if (!psi && options.psi) {
    psi = *options.psi;
    psi_name = options.psi_description;
  }
  if (!psi) {
    // Wider stencil so tabulated kinks average out.
    psi = inverse_phi_prime(d, d.is_tabulated() ? 1e-2 : 1e-4);
    psi_name = "1/Phi' (finite differences)";
  }
  rep.cond_b = check_b(measure, psi, psi_name, options.window);

  if (!rep.cond_a.pass()) {
    rep.verdict = Verdict::NotLipschitz;
    rep.basis = "condition (a) fails";
  } else if (rep.cond_b.b1 && rep.cond_b.b2) {
    rep.verdict = Verdict::Lipschitz;
    rep.basis = "(a), (b1) and (b2) hold";
  } else if (rep.cond_b.b1 && !rep.cond_b.b2) {
    rep.verdict = Verdict::NotLipschitz;
    rep.basis = "(b1) holds but (b2) fails";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.basis = "(b1) not established";
  }

  if (options.transport) {
    const double L = options.transport->lipschitz_constant();
    rep.transport_L = L;
    const bool finite = std::isfinite(L);
    if ((rep.verdict == Verdict::Lipschitz && !finite) ||
        (rep.verdict == Verdict::NotLipschitz && finite)) {
      rep.basis += "; disagrees with transport L = " + csv::format(L);
      rep.verdict = Verdict::Inconclusive;
    }
  }
  return rep;
}

CriteriaReport prop_lip_verdict(const RadialDensity& density, int n) {
  return prop_lip_verdict(RadialMeasure(density, n));
}

std::string CriteriaReport::to_text() const {
  std::ostringstream o;
  auto yn = [](bool b) { return b ? "pass" : "fail"; };
  o << "cond_a=" << yn(cond_a.pass()) << " positive=" << yn(cond_a.positive)
    << " liminf_at_0=" << csv::format(cond_a.liminf_estimate)
    << " r_f=" << csv::format(cond_a.inner_radius);
  if (cond_a.positivity_witness) o << " witness=" << csv::format(*cond_a.positivity_witness);
  o << '\n';
  o << "psi=" << cond_b.psi_description << '\n';
  o << "cond_b1=" << yn(cond_b.b1) << " lambda=" << csv::format(cond_b.lambda)
    << " r_range=[" << csv::format(cond_b.r_min) << "," << csv::format(cond_b.r_max) << "]\n";
  o << "cond_b2=" << yn(cond_b.b2) << " liminf=" << csv::format(cond_b.b2_liminf)
    << " first_half=" << csv::format(cond_b.b2_first_half) << '\n';
  if (logcvx) {
    o << "logcvx=" << yn(logcvx->pass()) << " phi2_positive=" << yn(logcvx->phi2_positive)
      << " phi1_unbounded=" << yn(logcvx->phi1_unbounded)
      << " ratio_bounded=" << yn(logcvx->ratio_bounded)
      << " phi2=" << csv::format(logcvx->phi2_last) << " phi1=" << csv::format(logcvx->phi1_last)
      << '\n';
  } else if (!logcvx_error.empty()) {
    o << "logcvx=error " << logcvx_error << '\n';
  }
  if (transport_L) o << "transport_L=" << csv::format(*transport_L) << '\n';
  o << "verdict=" << to_string(verdict) << " (" << basis << ")\n";
  return o.str();
}

void write_b_diagnostics(const std::filesystem::path& path, const RadialMeasure& measure,
                         const PsiFunction& psi, const TailWindow& window) {
  static const std::array<std::string, 4> header{"r", "tail", "ratio", "b2_term"};
  std::vector<double> tails;
  const auto radii = window_radii(measure, window, &tails);
  const auto& d = measure.density();
  const int n = measure.dimension();
  csv::Writer out(path, header);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    const double p = psi(r);
    const double log_base = d.log_value(r) + std::log(p) + (n - 1) * std::log(r);
    const double ratio = std::exp(std::log(measure.tail_integral(r)) - log_base);
    const std::array<double, 4> row{r, tails[k], ratio, p * p * log_base};
    out.row(row);
  }
  out.close();
}

}  // namespace radiso
