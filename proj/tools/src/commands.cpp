#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "density_spec.hpp"
#include "radiso/criteria.hpp"
#include "radiso/csv.hpp"
#include "radiso/errors.hpp"
#include "radiso/poincare.hpp"
#include "radiso/profile.hpp"

namespace radiso::cli {
namespace {

constexpr int kDefaultProfileGrid = 101;
constexpr double kKsAlpha = 0.01;
constexpr double kOrthantAlpha = 1e-4;

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DisconnectedSupportError& e) {
    err << "error: " << e.what() << " (gap near r=" << format_value(e.gap_radius()) << ")\n";
    return exit_code::kDisconnectedSupport;
  } catch (const DivergentMassError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDivergentMass;
  } catch (const AuditViolationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kAuditViolation;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kPrecondition;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInvalidArgs;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInvalidArgs;
  } catch (const SupportError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInvalidArgs;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::kInternal;
  }
}

void check_common(const Options& opt) {
  if (opt.n < 1) throw ParseError("--n must be a positive integer");
  if (!(opt.tol > 0.0 && opt.tol < 1.0)) throw ParseError("--tol must lie in (0, 1)");
  if (!(opt.cdf_floor > 0.0 && opt.cdf_floor < 0.05)) {
    throw ParseError("--cdf-floor must lie in (0, 0.05)");
  }
  if (opt.grid && *opt.grid < 2) throw ParseError("--grid must be at least 2");
}

RadialMeasure build_measure(const Options& opt) {
  check_common(opt);
  auto density = make_density(parse_density_spec(opt.density));
  return RadialMeasure(std::move(density), opt.n, numeric::QuadratureOptions{opt.tol, 10});
}

TransportMap build_map(const RadialMeasure& measure, const Options& opt, bool grid_is_nodes) {
  TransportOptions t;
  t.cdf_floor = opt.cdf_floor;
  if (grid_is_nodes && opt.grid) {
    if (*opt.grid < 16) throw ParseError("--grid must be at least 16 transport nodes");
    t.nodes = *opt.grid;
  }
  return TransportMap::build(measure, t);
}

void print_header(std::ostream& out, const RadialMeasure& m, const TransportMap& map) {
  out << "density=" << m.density().name() << "\n";
  out << "n=" << m.dimension() << "\n";
  out << "mass=" << format_value(m.mass()) << "\n";
  out << "L=" << format_value(map.lipschitz_constant()) << "\n";
  if (map.lipschitz().unbounded) out << "lipschitz_reason=" << map.lipschitz().reason << "\n";
}

std::string describe(std::span<const Interval> set) {
  std::string s;
  for (const auto& iv : set) {
    if (!s.empty()) s += "+";
    s += "[" + format_value(iv.lo) + ";" + format_value(iv.hi) + "]";
  }
  return s;
}

}  // namespace

std::string format_value(double v) {
  if (v == numeric::kInf) return "+inf";
  return csv::format(v);
}

int cmd_transport(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto measure = build_measure(opt);
    const auto map = build_map(measure, opt, true);
    if (!opt.out.empty()) map.write_csv(opt.out);
    print_header(out, measure, map);
    try {
      VerdictOptions v;
      v.transport = &map;
      const auto report = prop_lip_verdict(measure, v);
      out << "verdict=" << to_string(report.verdict) << "\n";
      out << "verdict_basis=" << report.basis << "\n";
    } catch (const PreconditionError& e) {
      out << "verdict=" << to_string(Verdict::Inconclusive) << "\n";
      out << "verdict_basis=" << e.what() << "\n";
    }
    return exit_code::kOk;
  });
}

int cmd_profile(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto measure = build_measure(opt);
    const auto map = build_map(measure, opt, false);
    const auto curve = bound_curve(map, opt.grid.value_or(kDefaultProfileGrid), measure.density());
    if (!opt.out.empty()) write_profile_csv(opt.out, curve);
    print_header(out, measure, map);
    out << "unbounded=" << (curve.unbounded ? 1 : 0) << "\n";
    out << "edge_case_half=" << (curve.edge_case_half ? 1 : 0) << "\n";
    if (curve.half_borderline) out << "half_borderline=1\n";
    out << "bound_half=" << format_value(curve.unbounded ? 0.0 : gaussian_profile(0.5) / curve.L)
        << "\n";
    if (measure.dimension() >= 2 && !curve.unbounded) {
      const auto balls = ball_audit(measure, map, 64, true);
      const auto halves = halfspace_audit(measure, map, 41, true);
      out << "ball_min_slack=" << format_value(balls.min_slack) << "\n";
      out << "halfspace_min_slack=" << format_value(halves.min_slack) << "\n";
      out << "violations=" << balls.violations + halves.violations << "\n";
      if (balls.violations + halves.violations > 0) return exit_code::kAuditViolation;
    }
    return exit_code::kOk;
  });
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.N.empty()) throw ParseError("--N needs at least one value");
    auto N = opt.N;
    std::sort(N.begin(), N.end());
    if (std::adjacent_find(N.begin(), N.end()) != N.end()) throw ParseError("--N has duplicates");
    const auto measure = build_measure(opt);
    const auto map = build_map(measure, opt, true);
    print_header(out, measure, map);

    const auto rows = convergence_diagnostic(map, N, map.grid_radii());
    if (!opt.out.empty()) write_diagnostics_csv(opt.out, rows);
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << "N=" << rows[i].N << " sup_error=" << format_value(rows[i].sup_error)
          << " l1_error=" << format_value(rows[i].l1_error) << "\n";
      if (i > 0 && !(rows[i].l1_error < rows[i - 1].l1_error)) ok = false;
    }
    out << "l1_decreasing=" << (ok ? 1 : 0) << "\n";

    if (opt.count > 0) {
      const auto batch = sample_pushforward(map, N.back(), opt.count, opt.seed);
      if (!opt.samples_out.empty()) write_batch_csv(opt.samples_out, batch);
      const double d = ks_statistic(batch, measure);
      const double crit = ks_critical_value(batch.count, kKsAlpha);
      out << "sample_N=" << N.back() << " count=" << batch.count << " seed=" << opt.seed << "\n";
      out << "ks_statistic=" << format_value(d) << " ks_critical=" << format_value(crit)
          << " ks_pass=" << (d <= crit ? 1 : 0) << "\n";
      if (d > crit) ok = false;
      if (measure.dimension() >= 2) {
        const auto o = orthant_chi_square(batch);
        out << "orthant_chi2=" << format_value(o.statistic) << " cells=" << o.cells
            << " p_value=" << format_value(o.p_value) << "\n";
        if (o.p_value < kOrthantAlpha) ok = false;
      }
    }
    if (!ok) err << "error: convergence check failed\n";
    return ok ? exit_code::kOk : exit_code::kVerifyFailed;
  });
}

int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.n < 1) throw ParseError("--n must be a positive integer");
    if (!(opt.p > 0.0) || !std::isfinite(opt.p)) throw ParseError("--p must be positive");
    const auto phi = make_phi(opt.phi);
    const auto c = classify(phi, opt.p, opt.n);
    out << "integrable=" << (c.integrable ? "yes" : "no")
        << " lipschitz=" << to_string(c.lipschitz) << "\n";
    out << "clause=" << c.which_clause << "\n";
    out << "phi=" << phi.name() << " p=" << format_value(opt.p) << " n=" << opt.n << "\n";
    out << "R_phi=" << format_value(c.R_phi) << " theta=" << format_value(c.theta)
        << " delta=" << format_value(c.delta) << "\n";
    return exit_code::kOk;
  });
}

int cmd_audit(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.n != 1) throw ParseError("audit needs --n 1");
    const auto measure = build_measure(opt);
    const auto map = build_map(measure, opt, true);
    print_header(out, measure, map);
    const auto rep = bound_audit(measure, map, opt.trials, opt.seed, true);
    out << "trials=" << rep.trials << " seed=" << opt.seed << "\n";
    out << "violations=" << rep.violations << "\n";
    if (rep.trials > 0) {
      out << "min_slack=" << format_value(rep.min_slack) << "\n";
      out << "min_slack_halfline=" << format_value(rep.min_slack_halfline) << "\n";
      out << "witness=" << describe(rep.witness) << " a=" << format_value(rep.witness_a)
          << " mu_plus=" << format_value(rep.witness_mu_plus) << "\n";
    }
    return rep.violations > 0 ? exit_code::kAuditViolation : exit_code::kOk;
  });
}

}  // namespace radiso::cli
