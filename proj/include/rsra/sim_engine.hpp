#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rsra/rach.hpp"
#include "rsra/radio_env.hpp"

namespace rsra {

/// Everything a single run needs.
struct SimulationConfig {
  DeploymentConfig deployment;
  ChannelParams channel;
  RachConfig rach;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

void validate(const SimulationConfig& cfg);

struct SlotOutcome {
  std::uint32_t frame = 0;
  std::uint32_t slot = 0;
  std::uint32_t contending = 0;
  std::uint32_t singleton_successes = 0;
  std::uint32_t sic_successes = 0;  ///< decoded out of groups of two or more
  std::uint32_t failed = 0;

  friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

struct FrameResult {
  std::uint32_t frame = 0;
  std::uint64_t contending = 0;
  std::uint64_t successes = 0;
  std::uint64_t backlog_remaining = 0;

  friend bool operator==(const FrameResult&, const FrameResult&) = default;
};

struct RunOptions {
  bool record_slots = true;        ///< fill RunSummary::per_slot
  bool record_transitions = false; ///< fill RunSummary::transitions
  bool record_success_ids = false; ///< fill RunSummary::successful_ids
};

struct RunSummary {
  std::vector<SlotOutcome> per_slot;
  std::vector<FrameResult> per_frame;
  double avg_contending_per_slot = 0.0;  ///< over all slots of all frames used
  double avg_successes_per_slot = 0.0;
  std::uint64_t total_successes = 0;
  std::uint32_t frames_used = 0;
  bool backlog_emptied = false;
  std::uint64_t seed = 0;
  SimulationConfig config;

  std::vector<StateTransition> transitions;
  std::vector<std::uint32_t> successful_ids;  ///< in order of success

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// One Monte-Carlo run. Deterministic in (cfg, seed); `seed` is the master
/// seed of every random substream, cfg.deployment.seed is not consulted.
///
/// Per frame: wake devices whose activation frame has come, contend,
/// decode every (slot, preamble) group with cfg.rach.decoder, then apply
/// the outcomes at frame end. Stops when every device is connected or after
/// cfg.rach.max_frames frames.
RunSummary run(const SimulationConfig& cfg, std::uint64_t seed, const RunOptions& opts = {});

/// One run per seed; result i belongs to seeds[i]. threads == 0 picks the
/// hardware concurrency.
std::vector<RunSummary> run_replicated(const SimulationConfig& cfg, std::span<const std::uint64_t> seeds,
                                       const RunOptions& opts = {}, unsigned threads = 0);

}  // namespace rsra
