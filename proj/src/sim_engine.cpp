#include "rsra/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rsra/decoders.hpp"
#include "rsra/errors.hpp"

namespace rsra {

void validate(const SimulationConfig& cfg) {
  validate(cfg.deployment);
  validate(cfg.channel);
  validate(cfg.rach);
  if (cfg.deployment.num_devices > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("deployment.num_devices", "too large");
  }
}

RunSummary run(const SimulationConfig& cfg, std::uint64_t seed, const RunOptions& opts) {
  validate(cfg);
  const RachConfig& rach = cfg.rach;

  RunSummary summary;
  summary.seed = seed;
  summary.config = cfg;

  Rng deploy_rng = substream(seed, StreamTag::Deployment);
  const auto positions = deploy(cfg.deployment, deploy_rng);
  auto devices = make_devices(positions, cfg.deployment.min_distance_km, cfg.channel);

  if (rach.activation_frames > 1) {
    Rng act_rng = substream(seed, StreamTag::Activation);
    std::uniform_int_distribution<std::uint32_t> pick(1, rach.activation_frames);
    for (Device& d : devices) d.activation_frame = pick(act_rng);
  }

  std::vector<StateTransition>* log = opts.record_transitions ? &summary.transitions : nullptr;
  auto move = [&](Device& d, DeviceState next, std::uint32_t frame) {
    if (log) log->push_back({d.id, frame, d.state, next});
    d.transition(next);
  };

  std::uint64_t backlog = devices.size();
  std::uint64_t contending_total = 0;
  std::vector<std::uint32_t> decoded_this_frame;

  for (std::uint32_t frame = 1; frame <= rach.max_frames && backlog > 0; ++frame) {
    for (Device& d : devices) {
      if (d.state == DeviceState::Sleep && d.activation_frame <= frame) {
        move(d, DeviceState::CompetingForFrame, frame);
      }
    }

    Rng contention_rng = substream(seed, StreamTag::Contention, frame);
    const FrameSchedule schedule = contend_frame(devices, rach, cfg.channel, contention_rng, frame, log);

    decoded_this_frame.clear();
    for (std::uint32_t slot = 1; slot <= rach.t_slots; ++slot) {
      SlotOutcome so;
      so.frame = frame;
      so.slot = slot;
      for (const MsgAGroup& g : schedule.slot_groups(slot)) {
        const DecodeOutcome outcome = decode(rach.decoder, g.members, rach);
        const auto n = static_cast<std::uint32_t>(g.members.size());
        const auto ok = static_cast<std::uint32_t>(outcome.decoded.size());
        so.contending += n;
        (n == 1 ? so.singleton_successes : so.sic_successes) += ok;
        so.failed += n - ok;
        decoded_this_frame.insert(decoded_this_frame.end(), outcome.decoded.begin(), outcome.decoded.end());
      }
      if (opts.record_slots) summary.per_slot.push_back(so);
    }

    // Outcomes take effect once the frame is over.
    for (std::uint32_t id : decoded_this_frame) move(devices[id], DeviceState::Connected, frame);
    for (Device& d : devices) {
      if (d.state == DeviceState::ContendingRach) move(d, DeviceState::CompetingForFrame, frame);
    }
    if (opts.record_success_ids) {
      summary.successful_ids.insert(summary.successful_ids.end(), decoded_this_frame.begin(),
                                    decoded_this_frame.end());
    }

    backlog -= decoded_this_frame.size();
    contending_total += schedule.size();
    summary.total_successes += decoded_this_frame.size();
    summary.per_frame.push_back({frame, schedule.size(), decoded_this_frame.size(), backlog});
    summary.frames_used = frame;
  }

  summary.backlog_emptied = backlog == 0;
  if (summary.frames_used > 0) {
    const double slots = static_cast<double>(summary.frames_used) * rach.t_slots;
    summary.avg_contending_per_slot = static_cast<double>(contending_total) / slots;
    summary.avg_successes_per_slot = static_cast<double>(summary.total_successes) / slots;
  }
  return summary;
}

std::vector<RunSummary> run_replicated(const SimulationConfig& cfg, std::span<const std::uint64_t> seeds,
                                       const RunOptions& opts, unsigned threads) {
  validate(cfg);
  std::vector<RunSummary> results(seeds.size());
  if (seeds.empty()) return results;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        results[i] = run(cfg, seeds[i], opts);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace rsra
