#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rsra/sim_engine.hpp"

namespace rsra {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Published per-slot averages for the M = 2e5, P = 0.9, dP = 7 dB setup
/// and the tolerance within which a reproduction is considered matching.
inline constexpr double kReferenceAvgContending = 87.0;
inline constexpr double kReferenceAvgSuccesses = 43.0;
inline constexpr double kReferenceTolerance = 0.30;

enum class SweepVariable { None, DeltaP, Load };

struct SweepSpec {
  SweepVariable variable = SweepVariable::None;
  std::vector<double> values;  ///< ignored for SweepVariable::None
  std::uint32_t replications = 20;
  std::uint64_t base_seed = 1;  ///< replication i runs with base_seed + i
  SimulationConfig base;
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;
};

/// Throws ConfigError for empty or non-increasing values, zero replications
/// or an invalid base configuration.
void validate(const SweepSpec& spec);

std::vector<std::uint64_t> replication_seeds(const SweepSpec& spec);

struct ReplicationAverages {
  std::uint32_t replication = 0;
  std::uint64_t seed = 0;
  std::uint32_t frames_used = 0;
  std::uint64_t contending = 0;
  std::uint64_t successes = 0;
  double avg_contending_per_slot = 0.0;
  double avg_successes_per_slot = 0.0;
  bool backlog_emptied = false;
};

struct PerSlotStudy {
  std::filesystem::path csv;          ///< per_slot.csv
  std::filesystem::path summary_csv;  ///< per_slot_summary.csv
  std::filesystem::path report;       ///< per_slot_report.txt
  std::filesystem::path manifest;
  std::vector<ReplicationAverages> replications;
  double mean_contending_per_slot = 0.0;
  double mean_successes_per_slot = 0.0;
  double stderr_contending_per_slot = 0.0;
  double stderr_successes_per_slot = 0.0;
  bool matches_reference = false;  ///< both means within kReferenceTolerance
};

struct SweepRow {
  double value = 0.0;  ///< delta P in dB, or device count
  std::uint32_t replication = 0;
  std::uint64_t seed = 0;
  std::uint64_t contending = 0;
  std::uint64_t successes = 0;
  std::uint64_t sic_successes = 0;
};

struct SweepPointSummary {
  double value = 0.0;
  double mean_contending = 0.0;
  double mean_successes = 0.0;
  double stderr_successes = 0.0;
};

struct SweepResult {
  std::filesystem::path csv;
  std::filesystem::path summary_csv;
  std::filesystem::path manifest;
  std::vector<SweepRow> rows;  ///< value-major, then replication
  std::vector<SweepPointSummary> points;
  std::size_t peak_index = 0;  ///< point with the largest mean successes
};

/// Multi-frame runs until drain; one per_slot.csv row per (replication,
/// frame, slot). Throws std::runtime_error on I/O failure.
PerSlotStudy per_slot_study(const SweepSpec& spec);

/// Single-frame runs over delta P values; requires base.rach.p_bar == 1.
/// Every value reuses the same seeds, so each seed sees one deployment and
/// one contention realisation across the whole sweep.
SweepResult delta_p_sweep(const SweepSpec& spec);

/// Single-frame runs over device counts; requires base.rach.p_bar == 1.
SweepResult load_sweep(const SweepSpec& spec);

struct SingleRun {
  RunSummary summary;
  std::filesystem::path per_slot_csv;  ///< per_slot.csv, replication 0
  std::filesystem::path frames_csv;    ///< frames.csv
  std::filesystem::path manifest;
};

/// One multi-frame run at spec.base_seed; writes per_slot.csv, frames.csv
/// and the manifest.
SingleRun single_run(const SweepSpec& spec);

/// Writes manifest.txt (artifact version, study name and every resolved
/// configuration key) into spec.out_dir.
std::filesystem::path write_manifest(const SweepSpec& spec, const std::string& study);

/// Fixed-point decimal with six fractional digits.
std::string format_fixed(double v);

}  // namespace rsra
