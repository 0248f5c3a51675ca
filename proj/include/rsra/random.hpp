#pragma once

#include <cstdint>
#include <random>

namespace rsra {

using Rng = std::mt19937_64;

/// Named substreams of a run's master seed. Contention randomness never
/// shares a stream with anything decoder-dependent.
enum class StreamTag : std::uint32_t {
  Deployment = 1,
  Activation = 2,
  Contention = 3,
};

/// Independent engine for (master_seed, tag, index). Pure function of its inputs.
Rng substream(std::uint64_t master_seed, StreamTag tag, std::uint64_t index = 0);

}  // namespace rsra
