#pragma once

// CSV output for trajectories and sweep tables. Numbers use 15 significant
// digits, lines end in '\n', and files are written to a temporary sibling and
// renamed into place so readers never observe a partial file.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lyapqc/sweeps.hpp"
#include "lyapqc/trajectory.hpp"

namespace lyapqc {

inline constexpr const char* kTrajectoryHeader = "t,re_a,im_a,re_b,im_b,V,dVdt,f,segment_kind";

void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

/// Parses what write_trajectory_csv produced. Throws ConfigError on malformed input.
std::vector<Sample> read_trajectory_csv(std::istream& is);

/// Long format, axis columns first: gamma,phi,<tables...> for 2-D results,
/// gamma,<tables...> or s,<tables...> for 1-D results.
void write_sweep_csv(std::ostream& os, const SweepResult& res);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& res);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace lyapqc
