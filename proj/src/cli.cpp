#include "rsra/cli.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "rsra/errors.hpp"

namespace rsra::cli {
namespace {

// Parameters each study pins before user overrides apply.
void apply_presets(Command c, RunConfig& cfg) {
  switch (c) {
    case Command::SweepDp:
      cfg.sim.rach.p_bar = 1.0;
      cfg.sim.deployment.num_devices = 145000;
      break;
    case Command::SweepLoad:
      cfg.sim.rach.p_bar = 1.0;
      cfg.sim.rach.delta_p_db = 7.0;
      break;
    default:
      break;
  }
}

std::string join_paths(std::initializer_list<std::filesystem::path> paths) {
  std::string s;
  for (const auto& p : paths) {
    if (!s.empty()) s += ",";
    s += p.string();
  }
  return s;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::SweepDp: return "sweep-dp";
    case Command::SweepLoad: return "sweep-load";
    case Command::PerSlot: return "per-slot";
    case Command::ValidateConfig: return "validate-config";
  }
  return "?";
}

CliInvocation parse_and_validate(const std::vector<std::string>& args) {
  CLI::App app{"Rate-splitting random access slot-level simulator", "rsra"};
  app.require_subcommand(1);

  CliInvocation inv;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  bool verbose = false;

  const std::pair<Command, const char*> commands[] = {
      {Command::Simulate, "Run one multi-frame simulation"},
      {Command::SweepDp, "Successes in one radio frame versus the SIC power gap"},
      {Command::SweepLoad, "Successes in one radio frame versus the number of devices"},
      {Command::PerSlot, "Per-slot contention and success statistics over replications"},
      {Command::ValidateConfig, "Resolve and print the configuration"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(command_name(cmd)), help);
    sub->add_option("-c,--config", config_path, "Configuration file (TOML sections)");
    sub->add_option("-o,--override", inv.overrides, "Override a key, e.g. rach.p_bar=1")->allow_extra_args(false);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("-s,--seed", seed, "Base seed");
    sub->add_flag("-q,--quiet", quiet, "Only print the summary line");
    sub->add_flag("-v,--verbose", verbose, "Print configuration warnings and details");
    subs.emplace_back(cmd, sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageFailure(e.what());
  }

  for (const auto& [cmd, sub] : subs) {
    if (sub->parsed()) inv.command = cmd;
  }
  CLI::App* active = nullptr;
  for (const auto& [cmd, sub] : subs) {
    if (cmd == inv.command) active = sub;
  }
  if (active->count("--config")) inv.config_path = config_path;
  if (active->count("--out")) inv.out_dir = out_dir;
  if (active->count("--seed")) inv.seed = seed;
  inv.verbosity = quiet ? 0 : (verbose ? 2 : 1);

  try {
    inv.resolved = inv.config_path ? load_config_file(*inv.config_path) : default_config();
    apply_presets(inv.command, inv.resolved);
    for (const auto& o : inv.overrides) apply_override(inv.resolved, o);
    if (inv.seed) inv.resolved.sim.deployment.seed = *inv.seed;
    if (inv.out_dir) inv.resolved.experiment.out_dir = inv.out_dir->string();
    validate(inv.resolved);
    if ((inv.command == Command::SweepDp || inv.command == Command::SweepLoad) &&
        inv.resolved.sim.rach.p_bar != 1.0) {
      throw ConfigError("rach.p_bar", std::string(command_name(inv.command)) + " requires p_bar = 1");
    }
  } catch (const ConfigError& e) {
    throw UsageFailure(std::string("invalid configuration: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageFailure(e.what());
  }
  return inv;
}

SweepSpec make_sweep_spec(const CliInvocation& inv) {
  SweepSpec spec;
  spec.base = inv.resolved.sim;
  spec.base_seed = inv.resolved.sim.deployment.seed;
  spec.replications = inv.resolved.experiment.replications;
  spec.out_dir = inv.resolved.experiment.out_dir;
  switch (inv.command) {
    case Command::SweepDp:
      spec.variable = SweepVariable::DeltaP;
      spec.values = inv.resolved.experiment.dp_values;
      break;
    case Command::SweepLoad:
      spec.variable = SweepVariable::Load;
      spec.values = inv.resolved.experiment.load_values;
      break;
    default:
      spec.variable = SweepVariable::None;
      break;
  }
  return spec;
}

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.verbosity >= 1) {
    for (const auto& w : hata_range_warnings(inv.resolved.sim.channel)) err << "warning: " << w << '\n';
  }
  const SweepSpec spec = make_sweep_spec(inv);
  const std::string name(command_name(inv.command));

  try {
    switch (inv.command) {
      case Command::ValidateConfig:
        out << to_config_text(inv.resolved);
        return kExitOk;

      case Command::Simulate: {
        const SingleRun r = single_run(spec);
        const RunSummary& s = r.summary;
        out << "ok command=" << name << " seed=" << s.seed << " frames=" << s.frames_used
            << " total_successes=" << s.total_successes << " backlog_emptied=" << (s.backlog_emptied ? 1 : 0)
            << " avg_contending_per_slot=" << format_fixed(s.avg_contending_per_slot)
            << " avg_successes_per_slot=" << format_fixed(s.avg_successes_per_slot)
            << " outputs=" << join_paths({r.per_slot_csv, r.frames_csv, r.manifest}) << '\n';
        return kExitOk;
      }

      case Command::PerSlot: {
        const PerSlotStudy st = per_slot_study(spec);
        if (inv.verbosity >= 1 && !st.matches_reference) {
          err << "note: per-slot averages diverge from the reference values (see " << st.report.string() << ")\n";
        }
        out << "ok command=" << name << " replications=" << st.replications.size()
            << " avg_contending_per_slot=" << format_fixed(st.mean_contending_per_slot)
            << " avg_successes_per_slot=" << format_fixed(st.mean_successes_per_slot)
            << " reference_match=" << (st.matches_reference ? 1 : 0)
            << " outputs=" << join_paths({st.csv, st.summary_csv, st.report, st.manifest}) << '\n';
        return kExitOk;
      }

      case Command::SweepDp:
      case Command::SweepLoad: {
        const SweepResult r = inv.command == Command::SweepDp ? delta_p_sweep(spec) : load_sweep(spec);
        const auto& peak = r.points[r.peak_index];
        if (inv.verbosity >= 2) {
          for (const auto& p : r.points) {
            err << "  value=" << format_fixed(p.value) << " mean_successes=" << format_fixed(p.mean_successes)
                << " stderr=" << format_fixed(p.stderr_successes) << '\n';
          }
        }
        out << "ok command=" << name << " points=" << r.points.size() << " replications=" << spec.replications
            << " peak_value=" << format_fixed(peak.value) << " peak_mean_successes=" << format_fixed(peak.mean_successes)
            << " outputs=" << join_paths({r.csv, r.summary_csv, r.manifest}) << '\n';
        return kExitOk;
      }
    }
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliInvocation inv;
  try {
    inv = parse_and_validate(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageFailure& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return execute(inv, out, err);
}

}  // namespace rsra::cli
