#include "rsra/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rsra/errors.hpp"

namespace rsra {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

// Integers may be written in float notation (2e5), as long as they are integral.
std::uint64_t parse_count(std::string_view key, std::string_view text, std::uint64_t max) {
  const double v = parse_double(key, text);
  if (v < 0.0 || v != std::floor(v) || v > static_cast<double>(max)) {
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(trim(text)) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::string parse_string(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') && text.back() == text.front()) {
    text = text.substr(1, text.size() - 2);
  }
  return std::string(text);
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(std::string(key), "expected a list like [0, 5, 10]");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += format_double(values[i]);
  }
  return s + "]";
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Field>& fields() {
  constexpr auto u32max = std::numeric_limits<std::uint32_t>::max();
  constexpr auto u64max = std::numeric_limits<std::uint64_t>::max();
  auto real = [](std::string key, auto accessor) {
    return Field{key,
                 [key, accessor](RunConfig& c, std::string_view v) { accessor(c) = parse_double(key, v); },
                 [accessor](const RunConfig& c) { return format_double(accessor(c)); }};
  };
  auto count = [](std::string key, auto accessor, std::uint64_t max) {
    return Field{key,
                 [key, accessor, max](RunConfig& c, std::string_view v) {
                   using T = std::remove_reference_t<decltype(accessor(c))>;
                   accessor(c) = static_cast<T>(parse_count(key, v, max));
                 },
                 [accessor](const RunConfig& c) { return std::to_string(accessor(c)); }};
  };
  auto list = [](std::string key, auto accessor) {
    return Field{key,
                 [key, accessor](RunConfig& c, std::string_view v) { accessor(c) = parse_list(key, v); },
                 [accessor](const RunConfig& c) { return format_list(accessor(c)); }};
  };

  static const std::vector<Field> table = {
      count("deployment.num_devices", [](auto& c) -> auto& { return c.sim.deployment.num_devices; }, u32max),
      real("deployment.radius_km", [](auto& c) -> auto& { return c.sim.deployment.radius_km; }),
      real("deployment.min_distance_km", [](auto& c) -> auto& { return c.sim.deployment.min_distance_km; }),
      count("deployment.seed", [](auto& c) -> auto& { return c.sim.deployment.seed; }, u64max),
      real("channel.f_mhz", [](auto& c) -> auto& { return c.sim.channel.f_mhz; }),
      real("channel.h_g_m", [](auto& c) -> auto& { return c.sim.channel.h_g_m; }),
      real("channel.h_d_m", [](auto& c) -> auto& { return c.sim.channel.h_d_m; }),
      real("channel.p_t_dbm", [](auto& c) -> auto& { return c.sim.channel.p_t_dbm; }),
      count("rach.t_slots", [](auto& c) -> auto& { return c.sim.rach.t_slots; }, u32max),
      count("rach.k_preambles", [](auto& c) -> auto& { return c.sim.rach.k_preambles; }, u32max),
      real("rach.p_bar", [](auto& c) -> auto& { return c.sim.rach.p_bar; }),
      real("rach.delta_p_db", [](auto& c) -> auto& { return c.sim.rach.delta_p_db; }),
      Field{"rach.decoder",
            [](RunConfig& c, std::string_view v) { c.sim.rach.decoder = parse_decoder(parse_string(v)); },
            [](const RunConfig& c) { return "\"" + std::string(to_string(c.sim.rach.decoder)) + "\""; }},
      count("rach.max_frames", [](auto& c) -> auto& { return c.sim.rach.max_frames; }, u32max),
      real("rach.nora_tau_us", [](auto& c) -> auto& { return c.sim.rach.nora_tau_us; }),
      real("rach.shadowing_sigma_db", [](auto& c) -> auto& { return c.sim.rach.shadowing_sigma_db; }),
      count("rach.activation_frames", [](auto& c) -> auto& { return c.sim.rach.activation_frames; }, u32max),
      count("experiment.replications", [](auto& c) -> auto& { return c.experiment.replications; }, u32max),
      Field{"experiment.out_dir",
            [](RunConfig& c, std::string_view v) { c.experiment.out_dir = parse_string(v); },
            [](const RunConfig& c) { return "\"" + c.experiment.out_dir + "\""; }},
      list("experiment.dp_values", [](auto& c) -> auto& { return c.experiment.dp_values; }),
      list("experiment.load_values", [](auto& c) -> auto& { return c.experiment.load_values; }),
  };
  return table;
}

void check_increasing(const std::string& key, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError(key, "must not be empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigError(key, "must be strictly increasing");
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  for (int dp = 0; dp <= 50; dp += 5) cfg.experiment.dp_values.push_back(dp);
  for (int m = 20000; m <= 300000; m += 20000) cfg.experiment.load_values.push_back(m);
  return cfg;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown configuration key");
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(trim(assignment)), "override must have the form key=value");
  }
  apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void parse_config_text(RunConfig& cfg, std::string_view text) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    // Strip comments outside quoted strings.
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quote) {
        if (ch == quote) quote = 0;
      } else if (ch == '"' || ch == '\'') {
        quote = ch;
      } else if (ch == '#') {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string key = section.empty() ? std::string(trim(line.substr(0, eq)))
                                            : section + "." + std::string(trim(line.substr(0, eq)));
    apply_setting(cfg, key, trim(line.substr(eq + 1)));
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = default_config();
  parse_config_text(cfg, buf.str());
  return cfg;
}

void validate(const RunConfig& cfg) {
  validate(cfg.sim);
  if (cfg.experiment.replications < 1) throw ConfigError("experiment.replications", "must be >= 1");
  if (cfg.experiment.out_dir.empty()) throw ConfigError("experiment.out_dir", "must not be empty");
  check_increasing("experiment.dp_values", cfg.experiment.dp_values);
  if (cfg.experiment.dp_values.front() < 0.0) throw ConfigError("experiment.dp_values", "must be >= 0");
  check_increasing("experiment.load_values", cfg.experiment.load_values);
  for (double m : cfg.experiment.load_values) {
    if (m < 0.0 || m != std::floor(m)) {
      throw ConfigError("experiment.load_values", "device counts must be non-negative integers");
    }
  }
}

std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [key, value] : to_key_values(cfg)) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

}  // namespace rsra
