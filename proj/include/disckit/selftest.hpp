#pragma once

#include <string>
#include <utility>
#include <vector>

namespace disckit {

struct SelftestResult {
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> messages;  // one per check
  bool all_passed() const {
    for (const auto& [name, ok] : checks)
      if (!ok) return false;
    return true;
  }
};

/// The invariant suite behind the `selftest` subcommand: spectral identities,
/// the Bishop closed form, the defect trio, the deformation rank law, the
/// continuity-principle sigma formula and the Gaussian moments; bundled
/// scenario files, when given, are run stage by stage against their declared
/// expectations.
SelftestResult run_selftest(const std::vector<std::string>& scenario_paths = {});

}  // namespace disckit
