#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rsra/rach.hpp"

namespace rsra {

/// Result of resolving one (slot, preamble) group at the gNB.
struct DecodeOutcome {
  std::vector<std::uint32_t> decoded;  ///< in decode order
  std::vector<std::uint32_t> failed;

  friend bool operator==(const DecodeOutcome&, const DecodeOutcome&) = default;
};

/// Baseline: a lone transmitter decodes, any collision is fatal.
DecodeOutcome collision_decode(std::span<const MsgA> group);

/// Power-ordered successive cancellation.
///
/// Members are ranked by received power, strongest first (ties by lower
/// device id). The strongest remaining signal is decoded and cancelled while
/// its margin over the next one exceeds delta_p_db. If the chain reaches the
/// weakest member it decodes interference-free; the first failed margin
/// leaves every weaker member undecoded.
DecodeOutcome rsra_sic_decode(std::span<const MsgA> group, double delta_p_db);

/// Arrival-time analogue of rsra_sic_decode: members ranked by earliest
/// msg-3 arrival, chain continues while consecutive arrival gaps exceed
/// tau_us. A coarse intra-slot stand-in for NORA, not a model of it.
DecodeOutcome nora_approx_decode(std::span<const MsgA> group, double tau_us);

/// Reference for rsra_sic_decode that evaluates each member's membership
/// predicate directly instead of running the cancellation loop.
DecodeOutcome oracle_decode(std::span<const MsgA> group, double delta_p_db);

/// Dispatch on cfg.decoder.
DecodeOutcome decode(DecoderKind kind, std::span<const MsgA> group, const RachConfig& cfg);

}  // namespace rsra
