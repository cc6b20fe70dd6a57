#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lumplab::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the library's invariant suite at desk scale: solver oracles, the
/// row-sum and banded-family spectrum placements, the Kronecker family partial
/// order, perturbation bounds, NKP identities and the dynamics stability
/// boundary. Deterministic given the seed.
std::vector<CheckResult> run_all(std::uint64_t seed);

/// Prints one line per check; returns true when everything passed.
bool report(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace lumplab::verify
