#include "density_spec.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "radiso/csv.hpp"
#include "radiso/errors.hpp"

namespace radiso::cli {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::map<std::string, double> parse_params(std::string_view text, const std::set<std::string>& keys,
                                           std::string_view kind) {
  std::map<std::string, double> out;
  if (text.empty()) throw ParseError(std::string(kind) + ": missing parameters");
  for (auto item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(std::string(kind) + ": expected key=value, got '" + std::string(item) + "'");
    }
    std::string key(item.substr(0, eq));
    if (!keys.count(key)) throw ParseError(std::string(kind) + ": unknown parameter '" + key + "'");
    if (out.count(key)) throw ParseError(std::string(kind) + ": repeated parameter '" + key + "'");
    const double v = csv::parse(item.substr(eq + 1));
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParseError(std::string(kind) + ": parameter " + key + " must be positive and finite");
    }
    out[key] = v;
  }
  for (const auto& k : keys) {
    if (!out.count(k)) throw ParseError(std::string(kind) + ": missing parameter '" + k + "'");
  }
  return out;
}

}  // namespace

DensitySpec parse_density_spec(std::string_view text) {
  DensitySpec spec;
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "gaussian") {
    if (colon != std::string_view::npos) throw ParseError("gaussian takes no parameters");
    spec.kind = DensityKind::Gaussian;
  } else if (head == "scaled-gaussian") {
    spec.kind = DensityKind::ScaledGaussian;
    spec.params = parse_params(rest, {"c"}, head);
  } else if (head == "exp-power") {
    spec.kind = DensityKind::ExpPower;
    spec.params = parse_params(rest, {"p"}, head);
  } else if (head == "q-exp") {
    spec.kind = DensityKind::QExp;
    spec.params = parse_params(rest, {"q", "p"}, head);
  } else if (head == "phi") {
    spec.kind = DensityKind::PhiFile;
    const auto comma = rest.rfind(',');
    if (comma == std::string_view::npos || comma == 0) throw ParseError("phi: expected <file>,p=<v>");
    spec.path = std::string(rest.substr(0, comma));
    spec.params = parse_params(rest.substr(comma + 1), {"p"}, head);
  } else if (head == "table") {
    spec.kind = DensityKind::Table;
    if (rest.empty()) throw ParseError("table: missing file");
    spec.path = std::string(rest);
  } else {
    throw ParseError("unknown density kind '" + std::string(head) + "'");
  }
  return spec;
}

RadialDensity make_density(const DensitySpec& spec) {
  switch (spec.kind) {
    case DensityKind::Gaussian:
      return RadialDensity::gaussian();
    case DensityKind::ScaledGaussian:
      return RadialDensity::scaled_gaussian(spec.params.at("c"));
    case DensityKind::ExpPower:
      return RadialDensity::exp_power(spec.params.at("p"));
    case DensityKind::QExp:
      return phi_p_density(PhiFunction::power(spec.params.at("q")), spec.params.at("p"));
    case DensityKind::PhiFile:
      return phi_p_density(PhiFunction::from_csv(spec.path), spec.params.at("p"));
    case DensityKind::Table:
      return RadialDensity::from_csv(spec.path);
  }
  throw ParseError("unhandled density kind");
}

PhiFunction make_phi(std::string_view text) {
  if (text == "identity") return PhiFunction::identity();
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "power") return PhiFunction::power(parse_params(rest, {"q"}, head).at("q"));
  if (head == "poly") {
    if (rest.empty()) throw ParseError("poly: missing coefficients");
    std::vector<double> c;
    for (auto item : split(rest, ',')) c.push_back(csv::parse(item));
    return PhiFunction::polynomial(std::move(c));
  }
  if (head == "table") {
    if (rest.empty()) throw ParseError("table: missing file");
    return PhiFunction::from_csv(std::string(rest));
  }
  if (colon == std::string_view::npos && !text.empty()) return PhiFunction::from_csv(std::string(text));
  throw ParseError("unknown phi kind '" + std::string(head) + "'");
}

}  // namespace radiso::cli
