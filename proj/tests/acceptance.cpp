// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rsra/decoders.hpp"
#include "rsra/experiments.hpp"
#include "rsra/radio_env.hpp"
#include "rsra/sim_engine.hpp"

using namespace rsra;
namespace fs = std::filesystem;

namespace {

constexpr std::uint32_t kReplications = 20;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path out_root() {
  static const fs::path root = [] {
    auto p = fs::temp_directory_path() / "rsra_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

SimulationConfig scenario(std::uint64_t m, double p_bar, double dp) {
  SimulationConfig cfg;
  cfg.deployment.num_devices = m;
  cfg.rach.t_slots = 1482;
  cfg.rach.k_preambles = 54;
  cfg.rach.p_bar = p_bar;
  cfg.rach.delta_p_db = dp;
  cfg.rach.decoder = DecoderKind::RsraSic;
  return cfg;
}

SweepSpec spec_for(SweepVariable v, SimulationConfig base, std::vector<double> values, const std::string& dir,
                   std::uint32_t reps = kReplications) {
  SweepSpec spec;
  spec.variable = v;
  spec.values = std::move(values);
  spec.replications = reps;
  spec.base_seed = 1;
  spec.base = std::move(base);
  spec.out_dir = out_root() / dir;
  return spec;
}

std::vector<double> dp_grid() {
  std::vector<double> v;
  for (int dp = 0; dp <= 50; dp += 5) v.push_back(dp);
  return v;
}

// -- criteria ---------------------------------------------------------------

Verdict dp_zero_completeness() {
  SimulationConfig cfg = scenario(145000, 1.0, 0.0);
  cfg.rach.max_frames = 1;
  bool all = true;
  double worst = 0.0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = run(cfg, seed, RunOptions{.record_slots = false});
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    const auto& f = s.per_frame.front();
    all = all && f.successes == f.contending && f.contending == 145000;
    if (seed == 1) detail = "contenders=" + std::to_string(f.contending) + " successes=" + std::to_string(f.successes);
  }
  return {all && worst < 10.0, detail + " (5 seeds) slowest_run=" + fmt(worst) + "s (limit 10s)"};
}

Verdict dp_monotone_decay() {
  const auto spec = spec_for(SweepVariable::DeltaP, scenario(145000, 1.0, 7.0), dp_grid(), "dp_sweep");
  const auto r = delta_p_sweep(spec);

  std::map<std::uint64_t, std::vector<const SweepRow*>> by_seed;
  for (const auto& row : r.rows) by_seed[row.seed].push_back(&row);

  int monotone = 0, decayed = 0;
  double worst_ratio = 0.0, worst_sic_ratio = 0.0;
  for (const auto& [seed, rows] : by_seed) {
    bool mono = true;
    for (std::size_t i = 1; i < rows.size(); ++i) mono = mono && rows[i]->successes <= rows[i - 1]->successes;
    monotone += mono;
    const double ratio = static_cast<double>(rows.back()->successes) / static_cast<double>(rows.front()->successes);
    const double sic_ratio =
        static_cast<double>(rows.back()->sic_successes) / static_cast<double>(rows.front()->sic_successes);
    decayed += ratio < 0.05;
    worst_ratio = std::max(worst_ratio, ratio);
    worst_sic_ratio = std::max(worst_sic_ratio, sic_ratio);
  }
  const int seeds = static_cast<int>(by_seed.size());
  const auto& p0 = r.points.front();
  const auto& p50 = r.points.back();
  std::ostringstream d;
  d << "seeds=" << seeds << " monotone_on=" << monotone << "/" << seeds << " below_5pct_on=" << decayed << "/"
    << seeds << " mean_successes(0dB)=" << fmt(p0.mean_successes, 1)
    << " mean_successes(50dB)=" << fmt(p50.mean_successes, 1) << " worst_ratio(50/0)=" << fmt(worst_ratio, 4)
    << " [sic-only worst_ratio=" << fmt(worst_sic_ratio, 5)
    << "; singleton groups decode at any threshold]";
  return {seeds >= 20 && monotone == seeds && decayed == seeds, d.str()};
}

Verdict load_sweep_peak() {
  std::vector<double> loads;
  for (int m = 20000; m <= 300000; m += 20000) loads.push_back(m);
  const auto spec = spec_for(SweepVariable::Load, scenario(0, 1.0, 7.0), loads, "load_sweep");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = load_sweep(spec);
  const double dt = seconds_since(t0);
  const auto& peak = r.points[r.peak_index];
  const double reference = 5.19e4;
  const double deviation = (peak.mean_successes - reference) / reference;
  std::ostringstream d;
  d << "peak_mean_successes=" << fmt(peak.mean_successes, 1) << " (se " << fmt(peak.stderr_successes, 1)
    << ") at M=" << static_cast<std::uint64_t>(peak.value) << " reference=51900 deviation=" << fmt(100 * deviation, 2)
    << "% (limit +-20%) runtime=" << fmt(dt, 1) << "s (limit 300s)";
  return {std::abs(deviation) <= 0.20 && dt < 300.0, d.str()};
}

Verdict per_slot_averages() {
  auto sic_spec = spec_for(SweepVariable::None, scenario(200000, 0.9, 7.0), {}, "per_slot_sic");
  auto col_spec = sic_spec;
  col_spec.base.rach.decoder = DecoderKind::Collision;
  col_spec.out_dir = out_root() / "per_slot_collision";
  const auto sic = per_slot_study(sic_spec);
  const auto col = per_slot_study(col_spec);

  const double sic_ratio = sic.mean_successes_per_slot / sic.mean_contending_per_slot;
  const double col_ratio = col.mean_successes_per_slot / col.mean_contending_per_slot;
  const bool flagged = slurp(sic.report).find("status=DIVERGENCE") != std::string::npos;
  const bool reported = sic.matches_reference || flagged;

  std::ostringstream d;
  d << "avg_contending/slot=" << fmt(sic.mean_contending_per_slot) << " avg_successes/slot="
    << fmt(sic.mean_successes_per_slot) << " (reference 87/43) ratio_sic=" << fmt(sic_ratio, 4)
    << " ratio_collision=" << fmt(col_ratio, 4) << " within_30pct=" << (sic.matches_reference ? "yes" : "no")
    << (flagged ? " divergence flagged in " + sic.report.filename().string() : std::string{});
  return {sic_ratio > col_ratio && reported, d.str()};
}

std::vector<std::pair<std::vector<MsgA>, double>> random_groups() {
  std::mt19937_64 gen(20240601);
  std::uniform_int_distribution<int> size(1, 5);
  std::uniform_real_distribution<double> power(-130.0, -70.0), dp(0.0, 50.0);
  std::vector<std::pair<std::vector<MsgA>, double>> out;
  for (int i = 0; i < 10000; ++i) {
    std::vector<MsgA> g(size(gen));
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = {static_cast<std::uint32_t>(k), 1, 1, power(gen), 0.0};
    out.emplace_back(std::move(g), dp(gen));
  }
  return out;
}

Verdict oracle_equivalence() {
  int mismatches = 0;
  for (const auto& [g, dp] : random_groups()) mismatches += !(rsra_sic_decode(g, dp) == oracle_decode(g, dp));
  return {mismatches == 0, "groups=10000 mismatches=" + std::to_string(mismatches)};
}

Verdict gap_structure() {
  int violations = 0, multi = 0;
  for (const auto& [g, dp] : random_groups()) {
    if (g.size() < 2) continue;
    ++multi;
    violations += rsra_sic_decode(g, dp).decoded.size() == g.size() - 1;
  }
  return {violations == 0, "groups_with_n>=2=" + std::to_string(multi) + " n-1_outcomes=" + std::to_string(violations)};
}

Verdict channel_correctness() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> f(150.0, 2000.0), hg(10.0, 200.0), hd(1.0, 10.0), r(0.035, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ChannelParams ch{f(gen), hg(gen), hd(gen), 24.0};
    const double dist = r(gen);
    // Re-derivation through natural logarithms in extended precision.
    const long double ln10 = std::log(10.0L);
    const long double lf = std::log(static_cast<long double>(ch.f_mhz)) / ln10;
    const long double lh = std::log(static_cast<long double>(ch.h_g_m)) / ln10;
    const long double a1 = 69.55L + 26.16L * lf - 13.82L * lh - (1.1L * lf - 0.7L) * ch.h_d_m;
    const long double a2 = 44.9L - 6.55L * lh;
    const long double pl = a1 + a2 * std::log(static_cast<long double>(dist)) / ln10;
    const auto got = hata_coefficients(ch);
    worst = std::max({worst, std::abs(got.a1_db - static_cast<double>(a1)),
                      std::abs(got.a2_db - static_cast<double>(a2)),
                      std::abs(path_loss_db(ch, dist) - static_cast<double>(pl))});
  }
  const ChannelParams def;
  const double pl1 = path_loss_db(def, 1.0);
  const double pr1 = received_power_dbm(def, 1.0);
  const bool point_ok = std::round(pl1 * 100) / 100 == 128.03 && std::round(pr1 * 100) / 100 == -104.03;
  std::ostringstream d;
  d << "param_sets=1000 max_abs_err=" << std::scientific << std::setprecision(2) << worst << std::defaultfloat
    << " dB (limit 1e-9) PL(1km)=" << fmt(pl1, 4) << " dB P_R(1km)=" << fmt(pr1, 4) << " dBm";
  return {worst <= 1e-9 && point_ok, d.str()};
}

Verdict contention_statistics() {
  SimulationConfig cfg = scenario(200000, 0.9, 7.0);
  cfg.rach.max_frames = 1;
  std::vector<double> per_slot;
  for (std::uint64_t seed = 1; seed <= kReplications; ++seed) {
    per_slot.push_back(run(cfg, seed, RunOptions{.record_slots = false}).avg_contending_per_slot);
  }
  double mean = 0.0;
  for (double v : per_slot) mean += v;
  mean /= per_slot.size();
  double ss = 0.0;
  for (double v : per_slot) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (per_slot.size() - 1) / per_slot.size());
  const double expected = 0.9 * 200000 / 1482.0;
  std::ostringstream d;
  d << "mean_first_frame_contenders/slot=" << fmt(mean, 4) << " expected=" << fmt(expected, 4)
    << " se=" << fmt(se, 4) << " |z|=" << fmt(std::abs(mean - expected) / se, 2) << " (limit 3)";
  return {std::abs(mean - expected) <= 3.0 * se, d.str()};
}

Verdict determinism() {
  auto compare = [](const std::vector<fs::path>& a, const std::vector<fs::path>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (slurp(a[i]).empty() || slurp(a[i]) != slurp(b[i])) return false;
    }
    return true;
  };
  bool ok = true;
  auto slot_a = spec_for(SweepVariable::None, scenario(200000, 0.9, 7.0), {}, "det_slot_a", 2);
  auto slot_b = slot_a;
  slot_b.out_dir = out_root() / "det_slot_b";
  const auto sa = per_slot_study(slot_a);
  const auto sb = per_slot_study(slot_b);
  ok = ok && compare({sa.csv, sa.summary_csv}, {sb.csv, sb.summary_csv});

  auto dp_a = spec_for(SweepVariable::DeltaP, scenario(145000, 1.0, 7.0), {0, 7, 25}, "det_dp_a", 2);
  auto dp_b = dp_a;
  dp_b.out_dir = out_root() / "det_dp_b";
  const auto da = delta_p_sweep(dp_a);
  const auto db = delta_p_sweep(dp_b);
  ok = ok && compare({da.csv, da.summary_csv}, {db.csv, db.summary_csv});

  auto load_a = spec_for(SweepVariable::Load, scenario(0, 1.0, 7.0), {50000, 150000}, "det_load_a", 2);
  auto load_b = load_a;
  load_b.out_dir = out_root() / "det_load_b";
  const auto la = load_sweep(load_a);
  const auto lb = load_sweep(load_b);
  ok = ok && compare({la.csv, la.summary_csv}, {lb.csv, lb.summary_csv});

  return {ok, "per_slot.csv, dp_sweep.csv, load_sweep.csv and summaries byte-identical across two runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"dP=0 completeness", dp_zero_completeness},
      {"dP monotone decay", dp_monotone_decay},
      {"load-sweep peak", load_sweep_peak},
      {"per-slot averages", per_slot_averages},
      {"oracle equivalence", oracle_equivalence},
      {"gap-structure invariant", gap_structure},
      {"channel correctness", channel_correctness},
      {"contention statistics", contention_statistics},
      {"determinism", determinism},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
