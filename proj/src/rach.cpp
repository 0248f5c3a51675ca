#include "rsra/rach.hpp"

#include <algorithm>
#include <string>

#include "rsra/errors.hpp"

namespace rsra {

std::string_view to_string(DeviceState s) {
  switch (s) {
    case DeviceState::Sleep: return "Sleep";
    case DeviceState::CompetingForFrame: return "CompetingForFrame";
    case DeviceState::ContendingRach: return "ContendingRach";
    case DeviceState::Connected: return "Connected";
  }
  return "?";
}

std::string_view to_string(DecoderKind d) {
  switch (d) {
    case DecoderKind::Collision: return "Collision";
    case DecoderKind::RsraSic: return "RsraSic";
    case DecoderKind::NoraApprox: return "NoraApprox";
  }
  return "?";
}

DecoderKind parse_decoder(std::string_view name) {
  for (auto d : {DecoderKind::Collision, DecoderKind::RsraSic, DecoderKind::NoraApprox}) {
    if (name == to_string(d)) return d;
  }
  throw ConfigError("rach.decoder", "unknown decoder '" + std::string(name) +
                                        "' (expected Collision, RsraSic or NoraApprox)");
}

bool is_legal_transition(DeviceState from, DeviceState to) {
  using S = DeviceState;
  switch (from) {
    case S::Sleep: return to == S::CompetingForFrame;
    case S::CompetingForFrame: return to == S::CompetingForFrame || to == S::ContendingRach;
    case S::ContendingRach: return to == S::Connected || to == S::CompetingForFrame;
    case S::Connected: return false;
  }
  return false;
}

void Device::transition(DeviceState next) {
  if (!is_legal_transition(state, next)) {
    throw ProtocolError("device " + std::to_string(id) + ": illegal transition " +
                        std::string(to_string(state)) + " -> " + std::string(to_string(next)));
  }
  state = next;
}

void validate(const RachConfig& cfg) {
  if (cfg.t_slots < 1) throw ConfigError("rach.t_slots", "must be >= 1");
  if (cfg.k_preambles < 1) throw ConfigError("rach.k_preambles", "must be >= 1");
  if (!(cfg.p_bar >= 0.0 && cfg.p_bar <= 1.0)) throw ConfigError("rach.p_bar", "must lie in [0, 1]");
  if (!(cfg.delta_p_db >= 0.0) || !std::isfinite(cfg.delta_p_db)) {
    throw ConfigError("rach.delta_p_db", "must be a finite value >= 0");
  }
  if (cfg.max_frames < 1) throw ConfigError("rach.max_frames", "must be >= 1");
  if (!(cfg.nora_tau_us >= 0.0)) throw ConfigError("rach.nora_tau_us", "must be >= 0");
  if (!(cfg.shadowing_sigma_db >= 0.0)) throw ConfigError("rach.shadowing_sigma_db", "must be >= 0");
  if (cfg.activation_frames < 1) throw ConfigError("rach.activation_frames", "must be >= 1");
}

std::vector<Device> make_devices(std::span<const Position> positions, double min_distance_km,
                                 const ChannelParams& ch) {
  std::vector<Device> devices;
  devices.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Device d;
    d.id = static_cast<std::uint32_t>(i);
    d.position = positions[i];
    d.distance_km = std::max(positions[i].distance_km(), min_distance_km);
    d.rx_power_dbm = received_power_dbm(ch, d.distance_km);
    devices.push_back(d);
  }
  return devices;
}

bool barring_draw(double p_bar, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < p_bar;
}

SlotPreamble select_slot_and_preamble(const RachConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> slot(1, cfg.t_slots);
  std::uniform_int_distribution<std::uint32_t> preamble(1, cfg.k_preambles);
  const std::uint32_t s = slot(rng);
  return {s, preamble(rng)};
}

MsgA make_msg_a(const Device& dev, SlotPreamble sp, const ChannelParams& ch, double shadowing_db) {
  if (dev.state != DeviceState::ContendingRach) {
    throw ProtocolError("device " + std::to_string(dev.id) + ": msg-A requires ContendingRach, state is " +
                        std::string(to_string(dev.state)));
  }
  return {dev.id, sp.preamble, sp.slot, received_power_dbm(ch, dev.distance_km) + shadowing_db,
          dev.distance_km / kLightKmPerUs};
}

MsgA build_msg_a(const Device& dev, SlotPreamble sp, const ChannelParams& ch, double shadowing_sigma_db,
                 Rng& rng) {
  double shadow = 0.0;
  if (shadowing_sigma_db > 0.0) {
    std::normal_distribution<double> dist(0.0, shadowing_sigma_db);
    shadow = dist(rng);
  }
  return make_msg_a(dev, sp, ch, shadow);
}

FrameSchedule::FrameSchedule(std::vector<MsgA> transmissions, std::uint32_t t_slots)
    : transmissions_(std::move(transmissions)), slot_begin_(t_slots + 1, 0), t_slots_(t_slots) {
  std::sort(transmissions_.begin(), transmissions_.end(), [](const MsgA& a, const MsgA& b) {
    if (a.slot != b.slot) return a.slot < b.slot;
    if (a.preamble != b.preamble) return a.preamble < b.preamble;
    return a.device_id < b.device_id;
  });

  const std::span<const MsgA> all = transmissions_;
  std::size_t begin = 0;
  while (begin < all.size()) {
    std::size_t end = begin + 1;
    while (end < all.size() && all[end].slot == all[begin].slot && all[end].preamble == all[begin].preamble) {
      ++end;
    }
    if (all[begin].slot < 1 || all[begin].slot > t_slots) {
      throw UsageError("FrameSchedule: slot index out of range");
    }
    groups_.push_back({all[begin].slot, all[begin].preamble, all.subspan(begin, end - begin)});
    begin = end;
  }

  // slot_begin_[s - 1] .. slot_begin_[s] index the groups of slot s.
  std::size_t g = 0;
  for (std::uint32_t s = 1; s <= t_slots; ++s) {
    slot_begin_[s - 1] = g;
    while (g < groups_.size() && groups_[g].slot == s) ++g;
  }
  slot_begin_[t_slots] = g;
}

std::span<const MsgAGroup> FrameSchedule::slot_groups(std::uint32_t slot) const {
  if (slot < 1 || slot > t_slots_) return {};
  return std::span<const MsgAGroup>(groups_).subspan(slot_begin_[slot - 1],
                                                     slot_begin_[slot] - slot_begin_[slot - 1]);
}

FrameSchedule contend_frame(std::span<Device> devices, const RachConfig& cfg, const ChannelParams& ch,
                            Rng& rng, std::uint32_t frame, std::vector<StateTransition>* log) {
  auto move = [&](Device& d, DeviceState next) {
    if (log) log->push_back({d.id, frame, d.state, next});
    d.transition(next);
  };

  std::vector<MsgA> sent;
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_sigma_db > 0.0 ? cfg.shadowing_sigma_db : 1.0);
  for (Device& d : devices) {
    if (d.state == DeviceState::ContendingRach) {
      throw ProtocolError("contend_frame: device " + std::to_string(d.id) + " still ContendingRach");
    }
    const bool admitted = barring_draw(cfg.p_bar, rng);
    const SlotPreamble sp = select_slot_and_preamble(cfg, rng);
    const double shadow_db = cfg.shadowing_sigma_db > 0.0 ? shadow(rng) : 0.0;

    if (d.state != DeviceState::CompetingForFrame) continue;
    if (!admitted) {
      move(d, DeviceState::CompetingForFrame);
      continue;
    }
    move(d, DeviceState::ContendingRach);
    ++d.attempts;
    sent.push_back(make_msg_a(d, sp, ch, shadow_db));
  }
  return FrameSchedule(std::move(sent), cfg.t_slots);
}

}  // namespace rsra
