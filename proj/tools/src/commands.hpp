#pragma once

// Subcommands of the radiso tool. Each returns a process exit code and
// writes key=value report lines to `out`, diagnostics to `err`.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace radiso::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInvalidArgs = 2;
inline constexpr int kDivergentMass = 3;
inline constexpr int kDisconnectedSupport = 4;
inline constexpr int kAuditViolation = 5;
inline constexpr int kVerifyFailed = 6;
inline constexpr int kPrecondition = 7;
inline constexpr int kIo = 8;
}  // namespace exit_code

struct Options {
  std::string density = "gaussian";
  int n = 1;
  std::string out;  // empty: no CSV
  std::uint64_t seed = 1;
  double tol = 1e-12;              // quadrature relative tolerance
  std::optional<int> grid;         // transport nodes, or a-grid size for profile
  double cdf_floor = 1e-10;
  // verify
  std::vector<long> N{100, 1000, 10000};
  std::size_t count = 100000;
  std::string samples_out;
  // classify
  std::string phi = "identity";
  double p = 2.0;
  // audit
  std::size_t trials = 10000;
};

int cmd_transport(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_profile(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_audit(const Options& opt, std::ostream& out, std::ostream& err);

// "+inf" for infinity, shortest round-trip decimal otherwise.
std::string format_value(double v);

}  // namespace radiso::cli
