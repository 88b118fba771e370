#pragma once

// Named end-to-end reproductions: build, search or verify, classify, assert.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdlat {

struct ScenarioOptions {
  /// Unlocks the long full scans (d = 10 at p = 2).
  bool heavy = false;
  std::size_t jobs = 1;
  std::uint64_t seed = 0x5eed;
  std::uint64_t samples = 1'000'000;
};

struct ClaimResult {
  std::string claim;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::vector<ClaimResult> claims;
  bool pass() const;
  /// One line per claim followed by an overall verdict.
  std::string render() const;
};

struct ScenarioInfo {
  std::string name;
  std::string alias;
  std::string summary;
};

const std::vector<ScenarioInfo>& scenario_registry();

/// Canonical name for a registered name or alias.
std::optional<std::string> resolve_scenario(const std::string& name);

/// Throws DomainError for unknown names.
ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options = {});

}  // namespace cdlat
