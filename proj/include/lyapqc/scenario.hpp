#pragma once

// Scenario files: INI-style sections [system] [initial] [policy]
// [simulation] [sweep] holding `key = value` pairs. Comments start with '#'
// or ';'. Angles are written in units of pi (phi = 1.75 means 7 pi / 4).
// Unknown sections or keys are rejected; missing keys take defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lyapqc/sweeps.hpp"
#include "lyapqc/trajectory.hpp"

namespace lyapqc {

enum class SweepKind { FirstSegment, SscFidelity, FidelityVsStrength, PhaseAlignment };

std::string_view to_string(SweepKind kind);

struct SweepSpec {
  SweepKind kind = SweepKind::FirstSegment;
  SweepGrid grid;
};

struct Scenario {
  SimConfig sim;
  std::optional<SweepSpec> sweep;
};

/// Throws ConfigError with "<source>:<line>: ..." context.
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace lyapqc
