#include "rsra/decoders.hpp"

#include <algorithm>
#include <cmath>

#include "rsra/errors.hpp"

namespace rsra {
namespace {

void require_group(std::span<const MsgA> group, const char* who) {
  if (group.empty()) throw UsageError(std::string(who) + ": empty group");
}

void require_threshold(double threshold, const char* who) {
  if (!(threshold >= 0.0)) throw UsageError(std::string(who) + ": threshold must be >= 0");
}

// Ranks members by `key` (descending when `strongest_first`), ties by id, and
// runs the cancellation chain over consecutive key gaps.
template <typename Key>
DecodeOutcome chain_decode(std::span<const MsgA> group, double threshold, Key key, bool strongest_first) {
  std::vector<const MsgA*> order;
  order.reserve(group.size());
  for (const MsgA& m : group) order.push_back(&m);
  std::sort(order.begin(), order.end(), [&](const MsgA* a, const MsgA* b) {
    const double ka = key(*a);
    const double kb = key(*b);
    if (ka != kb) return strongest_first ? ka > kb : ka < kb;
    return a->device_id < b->device_id;
  });

  DecodeOutcome out;
  std::size_t next = 0;
  while (next < order.size()) {
    if (next + 1 == order.size()) {
      // Everything above it has been cancelled.
      out.decoded.push_back(order[next]->device_id);
      ++next;
      break;
    }
    const double gap = std::abs(key(*order[next]) - key(*order[next + 1]));
    if (!(gap > threshold)) break;
    out.decoded.push_back(order[next]->device_id);
    ++next;
  }
  for (; next < order.size(); ++next) out.failed.push_back(order[next]->device_id);
  return out;
}

}  // namespace

DecodeOutcome collision_decode(std::span<const MsgA> group) {
  require_group(group, "collision_decode");
  DecodeOutcome out;
  if (group.size() == 1) {
    out.decoded.push_back(group.front().device_id);
    return out;
  }
  for (const MsgA& m : group) out.failed.push_back(m.device_id);
  std::sort(out.failed.begin(), out.failed.end());
  return out;
}

DecodeOutcome rsra_sic_decode(std::span<const MsgA> group, double delta_p_db) {
  require_group(group, "rsra_sic_decode");
  require_threshold(delta_p_db, "rsra_sic_decode");
  return chain_decode(group, delta_p_db, [](const MsgA& m) { return m.rx_power_dbm; }, true);
}

DecodeOutcome nora_approx_decode(std::span<const MsgA> group, double tau_us) {
  require_group(group, "nora_approx_decode");
  require_threshold(tau_us, "nora_approx_decode");
  return chain_decode(group, tau_us, [](const MsgA& m) { return m.arrival_time_us; }, false);
}

DecodeOutcome oracle_decode(std::span<const MsgA> group, double delta_p_db) {
  require_group(group, "oracle_decode");
  require_threshold(delta_p_db, "oracle_decode");
  const std::size_t n = group.size();

  // rank[i] = number of members that outrank member i.
  std::vector<std::size_t> rank(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MsgA& a = group[j];
      const MsgA& b = group[i];
      if (a.rx_power_dbm > b.rx_power_dbm ||
          (a.rx_power_dbm == b.rx_power_dbm && a.device_id < b.device_id)) {
        ++rank[i];
      }
    }
  }
  std::vector<const MsgA*> by_rank(n, nullptr);
  for (std::size_t i = 0; i < n; ++i) by_rank[rank[i]] = &group[i];

  // gap_ok[j]: margin between ranks j and j+1 exceeds the threshold.
  std::vector<bool> gap_ok(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    gap_ok[j] = by_rank[j]->rx_power_dbm - by_rank[j + 1]->rx_power_dbm > delta_p_db;
  }
  auto prefix_ok = [&](std::size_t count) {
    return std::all_of(gap_ok.begin(), gap_ok.begin() + static_cast<std::ptrdiff_t>(count),
                       [](bool b) { return b; });
  };

  DecodeOutcome out;
  for (std::size_t r = 0; r < n; ++r) {
    // Rank r (0-based) below the weakest needs gaps 0..r; the weakest needs all n-1.
    const bool ok = (r + 1 < n) ? prefix_ok(r + 1) : prefix_ok(n - 1);
    (ok ? out.decoded : out.failed).push_back(by_rank[r]->device_id);
  }
  return out;
}

DecodeOutcome decode(DecoderKind kind, std::span<const MsgA> group, const RachConfig& cfg) {
  switch (kind) {
    case DecoderKind::Collision: return collision_decode(group);
    case DecoderKind::RsraSic: return rsra_sic_decode(group, cfg.delta_p_db);
    case DecoderKind::NoraApprox: return nora_approx_decode(group, cfg.nora_tau_us);
  }
  throw UsageError("decode: unknown decoder");
}

}  // namespace rsra
