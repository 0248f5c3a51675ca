#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rsra/errors.hpp"
#include "rsra/rach.hpp"

using namespace rsra;

namespace {

std::vector<Device> devices_at(std::initializer_list<double> distances, DeviceState state) {
  std::vector<Position> pos;
  for (double r : distances) pos.push_back({r, 0.0});
  auto devs = make_devices(pos, 0.035, ChannelParams{});
  for (auto& d : devs) d.state = state;
  return devs;
}

}  // namespace

TEST_CASE("lifecycle edges") {
  using S = DeviceState;
  CHECK(is_legal_transition(S::Sleep, S::CompetingForFrame));
  CHECK(is_legal_transition(S::CompetingForFrame, S::CompetingForFrame));
  CHECK(is_legal_transition(S::CompetingForFrame, S::ContendingRach));
  CHECK(is_legal_transition(S::ContendingRach, S::Connected));
  CHECK(is_legal_transition(S::ContendingRach, S::CompetingForFrame));

  CHECK_FALSE(is_legal_transition(S::Sleep, S::ContendingRach));
  CHECK_FALSE(is_legal_transition(S::Sleep, S::Connected));
  CHECK_FALSE(is_legal_transition(S::CompetingForFrame, S::Connected));
  CHECK_FALSE(is_legal_transition(S::Connected, S::CompetingForFrame));
  CHECK_FALSE(is_legal_transition(S::ContendingRach, S::ContendingRach));

  Device d;
  CHECK_THROWS_AS(d.transition(S::Connected), ProtocolError);
  d.transition(S::CompetingForFrame);
  CHECK(d.state == S::CompetingForFrame);
}

TEST_CASE("make_devices clamps distance to the exclusion radius") {
  auto devs = make_devices(std::vector<Position>{{0.0, 0.0}, {0.6, 0.8}}, 0.035, ChannelParams{});
  CHECK(devs[0].distance_km == 0.035);
  CHECK(devs[1].distance_km == doctest::Approx(1.0));
  CHECK(devs[1].rx_power_dbm == doctest::Approx(-104.032181019229));
  CHECK(devs[1].state == DeviceState::Sleep);
}

TEST_CASE("rach config validation names the key") {
  RachConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.p_bar = 1.5;
  try {
    validate(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "rach.p_bar");
  }
  cfg = RachConfig{};
  cfg.t_slots = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RachConfig{};
  cfg.delta_p_db = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  CHECK_THROWS_AS(parse_decoder("Sic"), ConfigError);
  CHECK(parse_decoder("NoraApprox") == DecoderKind::NoraApprox);
}

TEST_CASE("barring draw extremes") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    REQUIRE_FALSE(barring_draw(0.0, rng));
    REQUIRE(barring_draw(1.0, rng));
  }
}

TEST_CASE("barring draw admits at rate p") {
  Rng rng(42);
  const int n = 1000000;
  int admitted = 0;
  for (int i = 0; i < n; ++i) admitted += barring_draw(0.9, rng);
  const double frac = static_cast<double>(admitted) / n;
  CHECK(std::abs(frac - 0.9) < 3.0 * std::sqrt(0.9 * 0.1 / n));
}

TEST_CASE("slot and preamble selection") {
  RachConfig one;
  one.t_slots = 1;
  one.k_preambles = 1;
  Rng rng(3);
  CHECK(select_slot_and_preamble(one, rng) == SlotPreamble{1, 1});

  const RachConfig cfg;
  Rng a(8), b(8);
  for (int i = 0; i < 1000; ++i) REQUIRE(select_slot_and_preamble(cfg, a) == select_slot_and_preamble(cfg, b));
}

TEST_CASE("slot and preamble marginals are uniform (chi-square, alpha 0.01)") {
  const RachConfig cfg;
  Rng rng(17);
  const int n = 1000000;
  std::vector<int> slots(cfg.t_slots + 1, 0), preambles(cfg.k_preambles + 1, 0);
  for (int i = 0; i < n; ++i) {
    const auto sp = select_slot_and_preamble(cfg, rng);
    REQUIRE(sp.slot >= 1);
    REQUIRE(sp.slot <= cfg.t_slots);
    REQUIRE(sp.preamble >= 1);
    REQUIRE(sp.preamble <= cfg.k_preambles);
    ++slots[sp.slot];
    ++preambles[sp.preamble];
  }
  auto chi2 = [n](const std::vector<int>& counts, int bins) {
    const double e = static_cast<double>(n) / bins;
    double x = 0.0;
    for (int b = 1; b <= bins; ++b) x += (counts[b] - e) * (counts[b] - e) / e;
    return x;
  };
  // Upper 1% points of chi-square with 1481 and 53 degrees of freedom.
  CHECK(chi2(slots, 1482) < 1610.5431214203454);
  CHECK(chi2(preambles, 54) < 79.84333812225145);
}

TEST_CASE("msg-A construction") {
  auto devs = devices_at({1.0, 0.299792458}, DeviceState::ContendingRach);
  const ChannelParams ch;
  Rng rng(1);
  const MsgA m = build_msg_a(devs[0], {3, 5}, ch, 0.0, rng);
  CHECK(m.device_id == 0);
  CHECK(m.slot == 3);
  CHECK(m.preamble == 5);
  CHECK(m.rx_power_dbm == doctest::Approx(-104.032181019229));
  CHECK(build_msg_a(devs[0], {3, 5}, ch, 0.0, rng).rx_power_dbm == m.rx_power_dbm);
  CHECK(build_msg_a(devs[1], {1, 1}, ch, 0.0, rng).arrival_time_us == doctest::Approx(1.0).epsilon(1e-12));

  devs[0].state = DeviceState::CompetingForFrame;
  CHECK_THROWS_AS(build_msg_a(devs[0], {1, 1}, ch, 0.0, rng), ProtocolError);
}

TEST_CASE("contend_frame with full barring leaves everyone waiting") {
  auto devs = devices_at({0.5, 1.0, 1.5}, DeviceState::CompetingForFrame);
  RachConfig cfg;
  cfg.p_bar = 0.0;
  Rng rng(1);
  const auto sched = contend_frame(devs, cfg, ChannelParams{}, rng);
  CHECK(sched.empty());
  CHECK(sched.groups().empty());
  for (const auto& d : devs) {
    CHECK(d.state == DeviceState::CompetingForFrame);
    CHECK(d.attempts == 0);
  }
}

TEST_CASE("contend_frame forced collision") {
  auto devs = devices_at({0.5, 1.0, 1.5}, DeviceState::CompetingForFrame);
  RachConfig cfg;
  cfg.t_slots = 1;
  cfg.k_preambles = 1;
  cfg.p_bar = 1.0;
  Rng rng(1);
  const auto sched = contend_frame(devs, cfg, ChannelParams{}, rng);
  REQUIRE(sched.groups().size() == 1);
  CHECK(sched.groups()[0].members.size() == 3);
  CHECK(sched.slot_groups(1).size() == 1);
  for (const auto& d : devs) {
    CHECK(d.state == DeviceState::ContendingRach);
    CHECK(d.attempts == 1);
  }
}

TEST_CASE("contend_frame rejects devices still contending") {
  auto devs = devices_at({0.5}, DeviceState::ContendingRach);
  Rng rng(1);
  CHECK_THROWS_AS(contend_frame(devs, RachConfig{}, ChannelParams{}, rng), ProtocolError);
}

TEST_CASE("contend_frame properties: one group per admitted device, conservation, legal log") {
  std::vector<Position> pos;
  Rng prng(5);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int i = 0; i < 3000; ++i) pos.push_back({u(prng), u(prng)});
  auto devs = make_devices(pos, 0.035, ChannelParams{});
  for (std::size_t i = 0; i < devs.size(); ++i) {
    devs[i].state = i % 4 == 0 ? DeviceState::Sleep : DeviceState::CompetingForFrame;
  }
  const auto competing_before = std::count_if(devs.begin(), devs.end(), [](const Device& d) {
    return d.state == DeviceState::CompetingForFrame;
  });

  RachConfig cfg;
  cfg.t_slots = 20;
  cfg.k_preambles = 10;
  cfg.p_bar = 0.6;
  Rng rng(9);
  std::vector<StateTransition> log;
  const auto sched = contend_frame(devs, cfg, ChannelParams{}, rng, 1, &log);

  std::set<std::uint32_t> seen;
  std::size_t grouped = 0;
  for (const auto& g : sched.groups()) {
    for (const auto& m : g.members) {
      REQUIRE(m.slot == g.slot);
      REQUIRE(m.preamble == g.preamble);
      REQUIRE(seen.insert(m.device_id).second);
      REQUIRE(devs[m.device_id].state == DeviceState::ContendingRach);
      ++grouped;
    }
  }
  const auto admitted = std::count_if(devs.begin(), devs.end(), [](const Device& d) {
    return d.state == DeviceState::ContendingRach;
  });
  const auto barred = std::count_if(devs.begin(), devs.end(), [](const Device& d) {
    return d.state == DeviceState::CompetingForFrame;
  });
  CHECK(grouped == static_cast<std::size_t>(admitted));
  CHECK(admitted + barred == competing_before);
  CHECK(log.size() == static_cast<std::size_t>(competing_before));
  for (const auto& t : log) REQUIRE(is_legal_transition(t.from, t.to));

  std::size_t by_slot = 0;
  for (std::uint32_t s = 1; s <= cfg.t_slots; ++s) {
    for (const auto& g : sched.slot_groups(s)) by_slot += g.members.size();
  }
  CHECK(by_slot == grouped);
}

TEST_CASE("contention draws for a device do not depend on other devices' states") {
  auto a = devices_at({0.5, 1.0, 1.5, 1.9}, DeviceState::CompetingForFrame);
  auto b = a;
  b[1].state = DeviceState::Connected;
  b[2].state = DeviceState::Sleep;
  RachConfig cfg;
  cfg.t_slots = 30;
  cfg.p_bar = 0.7;
  Rng ra(77), rb(77);
  const auto sa = contend_frame(a, cfg, ChannelParams{}, ra);
  const auto sb = contend_frame(b, cfg, ChannelParams{}, rb);
  auto find = [](const FrameSchedule& s, std::uint32_t id) -> const MsgA* {
    for (const auto& m : s.transmissions()) {
      if (m.device_id == id) return &m;
    }
    return nullptr;
  };
  for (std::uint32_t id : {0u, 3u}) {
    const MsgA* ma = find(sa, id);
    const MsgA* mb = find(sb, id);
    REQUIRE((ma == nullptr) == (mb == nullptr));
    if (ma) {
      CHECK(ma->slot == mb->slot);
      CHECK(ma->preamble == mb->preamble);
    }
  }
  CHECK(b[1].state == DeviceState::Connected);
  CHECK(b[2].state == DeviceState::Sleep);
}
