#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rsra/radio_env.hpp"
#include "rsra/random.hpp"

namespace rsra {

/// Device lifecycle. Legal edges:
///   Sleep -> CompetingForFrame -> ContendingRach -> Connected
///   ContendingRach -> CompetingForFrame   (decode failure, retry next frame)
///   CompetingForFrame -> CompetingForFrame (barred this frame)
enum class DeviceState : std::uint8_t { Sleep, CompetingForFrame, ContendingRach, Connected };

enum class DecoderKind : std::uint8_t { Collision, RsraSic, NoraApprox };

std::string_view to_string(DeviceState s);
std::string_view to_string(DecoderKind d);
/// Throws ConfigError("rach.decoder") for unknown names.
DecoderKind parse_decoder(std::string_view name);

bool is_legal_transition(DeviceState from, DeviceState to);

struct Device {
  std::uint32_t id = 0;
  Position position;
  DeviceState state = DeviceState::Sleep;
  std::uint32_t attempts = 0;
  double distance_km = 0.0;   ///< clamped below by the deployment's min distance
  double rx_power_dbm = 0.0;  ///< deterministic (unshadowed) received power
  std::uint32_t activation_frame = 1;

  /// Moves to `next`; throws ProtocolError on an edge outside the lifecycle.
  void transition(DeviceState next);
};

struct RachConfig {
  std::uint32_t t_slots = 1482;
  std::uint32_t k_preambles = 54;
  double p_bar = 0.9;
  double delta_p_db = 7.0;
  DecoderKind decoder = DecoderKind::RsraSic;
  std::uint32_t max_frames = 50;
  double nora_tau_us = 1.0;
  double shadowing_sigma_db = 0.0;
  /// Devices wake uniformly over frames 1..activation_frames; 1 = all backlogged at frame 1.
  std::uint32_t activation_frames = 1;

  friend bool operator==(const RachConfig&, const RachConfig&) = default;
};

void validate(const RachConfig& cfg);

/// One uplink attempt: common part (preamble) plus private part (msg-3)
/// received at rx_power_dbm.
struct MsgA {
  std::uint32_t device_id = 0;
  std::uint32_t preamble = 1;  ///< 1..K
  std::uint32_t slot = 1;      ///< 1..T
  double rx_power_dbm = 0.0;
  double arrival_time_us = 0.0;  ///< one-way propagation delay
};

struct SlotPreamble {
  std::uint32_t slot = 1;
  std::uint32_t preamble = 1;

  friend bool operator==(const SlotPreamble&, const SlotPreamble&) = default;
};

inline constexpr double kLightKmPerUs = 0.299792458;

/// Builds the device population from deployed positions. Every device
/// starts in Sleep with activation frame 1.
std::vector<Device> make_devices(std::span<const Position> positions, double min_distance_km,
                                 const ChannelParams& ch);

/// True iff a uniform draw n in [0, 1) satisfies n < p_bar.
bool barring_draw(double p_bar, Rng& rng);

SlotPreamble select_slot_and_preamble(const RachConfig& cfg, Rng& rng);

/// msg-A for a ContendingRach device with a given shadowing offset (dB).
/// Throws ProtocolError in any other state.
MsgA make_msg_a(const Device& dev, SlotPreamble sp, const ChannelParams& ch, double shadowing_db);

/// As make_msg_a, drawing the shadowing term from rng when sigma > 0.
MsgA build_msg_a(const Device& dev, SlotPreamble sp, const ChannelParams& ch, double shadowing_sigma_db,
                 Rng& rng);

/// A set of msg-A sharing (slot, preamble).
struct MsgAGroup {
  std::uint32_t slot = 1;
  std::uint32_t preamble = 1;
  std::span<const MsgA> members;
};

/// All msg-A of one radio frame, grouped by (slot, preamble).
class FrameSchedule {
 public:
  FrameSchedule() = default;
  FrameSchedule(std::vector<MsgA> transmissions, std::uint32_t t_slots);

  std::span<const MsgA> transmissions() const { return transmissions_; }
  std::size_t size() const { return transmissions_.size(); }
  bool empty() const { return transmissions_.empty(); }
  std::uint32_t t_slots() const { return t_slots_; }

  /// Groups in (slot, preamble) order.
  const std::vector<MsgAGroup>& groups() const { return groups_; }

  /// Groups of one slot (1-based); empty for idle slots.
  std::span<const MsgAGroup> slot_groups(std::uint32_t slot) const;

 private:
  std::vector<MsgA> transmissions_;
  std::vector<MsgAGroup> groups_;
  std::vector<std::size_t> slot_begin_;  // t_slots + 1 offsets into groups_
  std::uint32_t t_slots_ = 0;
};

struct StateTransition {
  std::uint32_t device_id;
  std::uint32_t frame;
  DeviceState from;
  DeviceState to;

  friend bool operator==(const StateTransition&, const StateTransition&) = default;
};

/// Runs the barring draw and slot/preamble selection for one frame.
///
/// Every device consumes the same random draws in id order whatever its
/// state, so the realisation for device i in frame f does not depend on
/// which other devices are still backlogged. Only CompetingForFrame devices
/// act on their draws: admitted ones move to ContendingRach and transmit.
FrameSchedule contend_frame(std::span<Device> devices, const RachConfig& cfg, const ChannelParams& ch,
                            Rng& rng, std::uint32_t frame = 1,
                            std::vector<StateTransition>* log = nullptr);

}  // namespace rsra
