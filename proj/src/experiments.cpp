#include "rsra/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rsra/config.hpp"
#include "rsra/errors.hpp"

namespace rsra {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  if (xs.empty()) return r;
  const double n = static_cast<double>(xs.size());
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << header << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_.string());
  }

 private:
  static std::string cell(double v) { return format_fixed(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(std::uint32_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }

  std::filesystem::path path_;
  std::ofstream out_;
};

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             (ec ? ": " + ec.message() : std::string{}));
  }
}

void require_full_access(const SweepSpec& spec, const char* who) {
  if (spec.base.rach.p_bar != 1.0) {
    throw ConfigError("rach.p_bar", std::string(who) + " requires p_bar = 1 (every device contends once)");
  }
}

}  // namespace

std::filesystem::path write_manifest(const SweepSpec& spec, const std::string& study) {
  RunConfig resolved = default_config();
  resolved.sim = spec.base;
  resolved.sim.deployment.seed = spec.base_seed;
  resolved.experiment.replications = spec.replications;
  resolved.experiment.out_dir = spec.out_dir.string();
  if (spec.variable == SweepVariable::DeltaP) resolved.experiment.dp_values = spec.values;
  if (spec.variable == SweepVariable::Load) resolved.experiment.load_values = spec.values;

  const auto path = spec.out_dir / "manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "artifact_version=" << kArtifactVersion << '\n';
  out << "study=" << study << '\n';
  for (const auto& [key, value] : to_key_values(resolved)) out << key << '=' << value << '\n';
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return path;
}

std::string format_fixed(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

void validate(const SweepSpec& spec) {
  validate(spec.base);
  if (spec.replications < 1) throw ConfigError("experiment.replications", "must be >= 1");
  if (spec.variable == SweepVariable::None) return;
  const char* key = spec.variable == SweepVariable::DeltaP ? "experiment.dp_values" : "experiment.load_values";
  if (spec.values.empty()) throw ConfigError(key, "must not be empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) throw ConfigError(key, "must be strictly increasing");
  }
  for (double v : spec.values) {
    if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
    if (spec.variable == SweepVariable::Load && v != std::floor(v)) {
      throw ConfigError(key, "device counts must be integers");
    }
  }
}

std::vector<std::uint64_t> replication_seeds(const SweepSpec& spec) {
  std::vector<std::uint64_t> seeds(spec.replications);
  std::iota(seeds.begin(), seeds.end(), spec.base_seed);
  return seeds;
}

SingleRun single_run(const SweepSpec& spec) {
  validate(spec);
  prepare_out_dir(spec.out_dir);

  SingleRun result;
  result.summary = run(spec.base, spec.base_seed);
  result.per_slot_csv = spec.out_dir / "per_slot.csv";
  result.frames_csv = spec.out_dir / "frames.csv";

  CsvFile slots(result.per_slot_csv, "replication,seed,frame,slot,contending,singleton_successes,sic_successes,failed");
  for (const SlotOutcome& s : result.summary.per_slot) {
    slots.row(0u, result.summary.seed, s.frame, s.slot, s.contending, s.singleton_successes, s.sic_successes, s.failed);
  }
  slots.close();

  CsvFile frames(result.frames_csv, "frame,contending,successes,backlog_remaining");
  for (const FrameResult& f : result.summary.per_frame) {
    frames.row(f.frame, f.contending, f.successes, f.backlog_remaining);
  }
  frames.close();

  result.manifest = write_manifest(spec, "simulate");
  return result;
}

PerSlotStudy per_slot_study(const SweepSpec& spec) {
  validate(spec);
  prepare_out_dir(spec.out_dir);

  const auto seeds = replication_seeds(spec);
  const auto runs = run_replicated(spec.base, seeds, RunOptions{}, spec.threads);

  PerSlotStudy study;
  study.csv = spec.out_dir / "per_slot.csv";
  study.summary_csv = spec.out_dir / "per_slot_summary.csv";
  study.report = spec.out_dir / "per_slot_report.txt";

  CsvFile csv(study.csv, "replication,seed,frame,slot,contending,singleton_successes,sic_successes,failed");
  std::vector<double> contending, successes;
  for (std::uint32_t r = 0; r < runs.size(); ++r) {
    const RunSummary& run = runs[r];
    for (const SlotOutcome& s : run.per_slot) {
      csv.row(r, run.seed, s.frame, s.slot, s.contending, s.singleton_successes, s.sic_successes, s.failed);
    }
    std::uint64_t sent = 0;
    for (const FrameResult& f : run.per_frame) sent += f.contending;
    study.replications.push_back({r, run.seed, run.frames_used, sent, run.total_successes,
                                  run.avg_contending_per_slot, run.avg_successes_per_slot, run.backlog_emptied});
    contending.push_back(run.avg_contending_per_slot);
    successes.push_back(run.avg_successes_per_slot);
  }
  csv.close();

  CsvFile summary(study.summary_csv,
                  "replication,seed,frames_used,contending,successes,avg_contending_per_slot,"
                  "avg_successes_per_slot,backlog_emptied");
  for (const auto& rep : study.replications) {
    summary.row(rep.replication, rep.seed, rep.frames_used, rep.contending, rep.successes,
                rep.avg_contending_per_slot, rep.avg_successes_per_slot, rep.backlog_emptied);
  }
  summary.close();

  const auto c = mean_se(contending);
  const auto s = mean_se(successes);
  study.mean_contending_per_slot = c.mean;
  study.stderr_contending_per_slot = c.se;
  study.mean_successes_per_slot = s.mean;
  study.stderr_successes_per_slot = s.se;
  auto within = [](double got, double ref) { return std::abs(got - ref) <= kReferenceTolerance * ref; };
  study.matches_reference = within(c.mean, kReferenceAvgContending) && within(s.mean, kReferenceAvgSuccesses);

  std::ofstream report(study.report, std::ios::binary);
  if (!report) throw std::runtime_error("cannot open " + study.report.string() + " for writing");
  report << "decoder=" << to_string(spec.base.rach.decoder) << '\n'
         << "replications=" << spec.replications << '\n'
         << "avg_contending_per_slot=" << format_fixed(c.mean) << '\n'
         << "stderr_contending_per_slot=" << format_fixed(c.se) << '\n'
         << "avg_successes_per_slot=" << format_fixed(s.mean) << '\n'
         << "stderr_successes_per_slot=" << format_fixed(s.se) << '\n'
         << "reference_avg_contending_per_slot=" << format_fixed(kReferenceAvgContending) << '\n'
         << "reference_avg_successes_per_slot=" << format_fixed(kReferenceAvgSuccesses) << '\n'
         << "reference_tolerance=" << format_fixed(kReferenceTolerance) << '\n'
         << "averaging=all slots of all frames until the backlog drains or max_frames\n";
  if (study.matches_reference) {
    report << "status=within_reference\n";
  } else {
    report << "status=DIVERGENCE averages differ from the reference by more than the tolerance; "
              "the reference traffic and averaging model is not fully specified\n";
  }
  report.close();
  if (!report) throw std::runtime_error("failed writing " + study.report.string());

  study.manifest = write_manifest(spec, "per-slot");
  return study;
}

namespace {

SweepResult single_frame_sweep(const SweepSpec& spec, const char* csv_name, const char* header,
                               const char* summary_name, const char* summary_header) {
  prepare_out_dir(spec.out_dir);
  const auto seeds = replication_seeds(spec);

  SweepResult result;
  result.csv = spec.out_dir / csv_name;
  result.summary_csv = spec.out_dir / summary_name;

  for (double value : spec.values) {
    SimulationConfig cfg = spec.base;
    cfg.rach.max_frames = 1;
    if (spec.variable == SweepVariable::DeltaP) {
      cfg.rach.delta_p_db = value;
    } else {
      cfg.deployment.num_devices = static_cast<std::uint64_t>(value);
    }
    const auto runs = run_replicated(cfg, seeds, RunOptions{}, spec.threads);

    std::vector<double> contending, successes;
    for (std::uint32_t r = 0; r < runs.size(); ++r) {
      SweepRow row{value, r, runs[r].seed, 0, 0, 0};
      if (!runs[r].per_frame.empty()) {
        row.contending = runs[r].per_frame.front().contending;
        row.successes = runs[r].per_frame.front().successes;
      }
      for (const SlotOutcome& s : runs[r].per_slot) row.sic_successes += s.sic_successes;
      contending.push_back(static_cast<double>(row.contending));
      successes.push_back(static_cast<double>(row.successes));
      result.rows.push_back(row);
    }
    const auto c = mean_se(contending);
    const auto s = mean_se(successes);
    result.points.push_back({value, c.mean, s.mean, s.se});
  }

  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].mean_successes > result.points[result.peak_index].mean_successes) result.peak_index = i;
  }

  CsvFile csv(result.csv, header);
  const bool counts = spec.variable == SweepVariable::Load;
  for (const SweepRow& row : result.rows) {
    if (counts) {
      csv.row(row.replication, row.seed, static_cast<std::uint64_t>(row.value), row.contending, row.successes);
    } else {
      csv.row(row.replication, row.seed, row.value, row.contending, row.successes);
    }
  }
  csv.close();

  CsvFile summary(result.summary_csv, summary_header);
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    const bool peak = i == result.peak_index;
    if (counts) {
      summary.row(static_cast<std::uint64_t>(p.value), p.mean_contending, p.mean_successes, p.stderr_successes, peak);
    } else {
      summary.row(p.value, p.mean_contending, p.mean_successes, p.stderr_successes, peak);
    }
  }
  summary.close();

  result.manifest = write_manifest(spec, spec.variable == SweepVariable::DeltaP ? "sweep-dp" : "sweep-load");
  return result;
}

}  // namespace

SweepResult delta_p_sweep(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::DeltaP) throw UsageError("delta_p_sweep: spec.variable must be DeltaP");
  validate(spec);
  require_full_access(spec, "delta_p_sweep");
  return single_frame_sweep(spec, "dp_sweep.csv", "replication,seed,delta_p_db,contending,successes",
                            "dp_sweep_summary.csv",
                            "delta_p_db,mean_contending,mean_successes,stderr_successes,is_peak");
}

SweepResult load_sweep(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::Load) throw UsageError("load_sweep: spec.variable must be Load");
  validate(spec);
  require_full_access(spec, "load_sweep");
  return single_frame_sweep(spec, "load_sweep.csv", "replication,seed,m_devices,contending,successes",
                            "load_sweep_summary.csv",
                            "m_devices,mean_contending,mean_successes,stderr_successes,is_peak");
}

}  // namespace rsra
