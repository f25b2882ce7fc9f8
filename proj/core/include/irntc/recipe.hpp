#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irntc/schedule.hpp"

namespace irntc {

inline constexpr const char* kVersion = "0.1.0";

// Benchmark increment schedules bundled with the library (AWGN, 2 dB,
// five decoding attempts); used by the "table2" recipe and the test suite.
std::vector<IncrementSchedule> benchmark_schedules_awgn2db();

struct RecipeReport {
  std::string preset;
  std::string outdir;
  std::string manifest_path;
  std::vector<std::string> files;   // CSVs written, relative to outdir
  std::vector<std::string> errors;  // "task: message" for failed sub-tasks
  double wall_seconds = 0.0;
  bool ok() const { return errors.empty(); }
};

std::vector<std::string> recipe_names();

// Runs a named preset: every sub-task writes one CSV under `outdir`, and a
// manifest.json records version, parameters, seed, outputs, wall time, and
// any sub-task failures (a partial run still writes the manifest). Analysis
// presets are byte-deterministic; simulation presets are seed-deterministic.
// Throws std::invalid_argument for an unknown preset.
RecipeReport run_recipe(const std::string& name, const std::string& outdir,
                        uint64_t seed);

}  // namespace irntc
