#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coop/simulate.hpp"
#include "coop/sweep.hpp"

namespace coop {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

/// Header `t,u,v`, one line per sample, LF line endings.
std::string trajectory_csv(const Trajectory& tr);

/// Header `param,existence,s_minus,s_plus,u_plus,v_plus,tr_plus,det_plus,
/// verdict_plus,verdict_minus,attractor,period,v_min,v_max`; absent fields
/// are empty.
std::string sweep_csv(const std::vector<SweepRow>& rows);

extern const char* const kTrajectoryHeader;
extern const char* const kSweepHeader;

/// Writes to a temporary file in the same directory, then renames it over
/// `path`. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace coop
