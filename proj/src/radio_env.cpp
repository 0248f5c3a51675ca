#include "rsra/radio_env.hpp"

#include <numbers>
#include <sstream>

#include "rsra/errors.hpp"

namespace rsra {

void validate(const DeploymentConfig& cfg) {
  if (!(cfg.radius_km > 0.0) || !std::isfinite(cfg.radius_km)) {
    throw ConfigError("deployment.radius_km", "must be a positive finite distance");
  }
  if (!(cfg.min_distance_km >= 0.0) || !(cfg.min_distance_km < cfg.radius_km)) {
    throw ConfigError("deployment.min_distance_km", "must satisfy 0 <= min_distance_km < radius_km");
  }
}

void validate(const ChannelParams& ch) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(ch.f_mhz)) throw ConfigError("channel.f_mhz", "must be positive");
  if (!positive(ch.h_g_m)) throw ConfigError("channel.h_g_m", "must be positive");
  if (!positive(ch.h_d_m)) throw ConfigError("channel.h_d_m", "must be positive");
  if (!std::isfinite(ch.p_t_dbm)) throw ConfigError("channel.p_t_dbm", "must be finite");
}

std::vector<std::string> hata_range_warnings(const ChannelParams& ch) {
  std::vector<std::string> out;
  auto check = [&out](const char* key, double v, double lo, double hi) {
    if (v < lo || v > hi) {
      std::ostringstream os;
      os << key << "=" << v << " outside Hata nominal range [" << lo << ", " << hi << "]";
      out.push_back(os.str());
    }
  };
  check("channel.f_mhz", ch.f_mhz, 150.0, 1500.0);
  check("channel.h_g_m", ch.h_g_m, 30.0, 200.0);
  check("channel.h_d_m", ch.h_d_m, 1.0, 10.0);
  return out;
}

std::vector<Position> deploy(const DeploymentConfig& cfg, Rng& rng) {
  validate(cfg);
  const double r_min_sq = cfg.min_distance_km * cfg.min_distance_km;
  const double span = cfg.radius_km * cfg.radius_km - r_min_sq;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  std::vector<Position> out;
  out.reserve(cfg.num_devices);
  for (std::uint64_t i = 0; i < cfg.num_devices; ++i) {
    const double r = std::sqrt(unit(rng) * span + r_min_sq);
    const double theta = angle(rng);
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

HataCoefficients hata_coefficients(const ChannelParams& ch) {
  if (!(ch.f_mhz > 0.0) || !(ch.h_g_m > 0.0)) {
    throw DomainError("hata_coefficients: frequency and gNB height must be positive");
  }
  if (!(ch.h_d_m >= 0.0)) {
    throw DomainError("hata_coefficients: device height must be non-negative");
  }
  const double log_f = std::log10(ch.f_mhz);
  const double log_hg = std::log10(ch.h_g_m);
  return {
      69.55 + 26.16 * log_f - 13.82 * log_hg - (1.1 * log_f - 0.7) * ch.h_d_m,
      44.9 - 6.55 * log_hg,
  };
}

double path_loss_db(const ChannelParams& ch, double r_km) {
  if (!(r_km > 0.0)) {
    throw DomainError("path_loss_db: distance must be positive");
  }
  const auto [a1, a2] = hata_coefficients(ch);
  return a1 + a2 * std::log10(r_km);
}

double received_power_dbm(const ChannelParams& ch, double r_km) {
  return ch.p_t_dbm - path_loss_db(ch, r_km);
}

double received_power_dbm(const ChannelParams& ch, double r_km, double shadowing_sigma_db, Rng& rng) {
  const double mean = received_power_dbm(ch, r_km);
  if (shadowing_sigma_db <= 0.0) return mean;
  std::normal_distribution<double> shadow(0.0, shadowing_sigma_db);
  return mean + shadow(rng);
}

}  // namespace rsra
