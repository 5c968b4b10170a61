#pragma once

// Text forms of densities and phi functions accepted on the command line.
//
//   gaussian | scaled-gaussian:c=<v> | exp-power:p=<v> | q-exp:q=<v>,p=<v>
//   | phi:<file>,p=<v> | table:<file>
//
//   power:q=<v> | identity | poly:<c0>,<c1>,... | table:<file> | <file>

#include <map>
#include <string>
#include <string_view>

#include "radiso/phiexp.hpp"
#include "radiso/radial.hpp"

namespace radiso::cli {

enum class DensityKind { Gaussian, ScaledGaussian, ExpPower, QExp, PhiFile, Table };

struct DensitySpec {
  DensityKind kind = DensityKind::Gaussian;
  std::map<std::string, double> params;
  std::string path;
};

// Throws ParseError on unknown kinds, missing or extra parameters, and
// parameters outside (0, inf).
DensitySpec parse_density_spec(std::string_view text);
// Reads files as needed (IoError / ParseError).
RadialDensity make_density(const DensitySpec& spec);

PhiFunction make_phi(std::string_view text);

}  // namespace radiso::cli
