#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rsra/random.hpp"

namespace rsra {

/// Planar device location in km; the gNB sits at the origin.
struct Position {
  double x_km = 0.0;
  double y_km = 0.0;

  double distance_km() const { return std::hypot(x_km, y_km); }

  friend bool operator==(const Position&, const Position&) = default;
};

/// Okumura-Hata urban link parameters.
struct ChannelParams {
  double f_mhz = 1500.0;  ///< carrier frequency
  double h_g_m = 30.0;    ///< gNB antenna height
  double h_d_m = 1.5;     ///< device antenna height
  double p_t_dbm = 24.0;  ///< device transmit power

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

struct DeploymentConfig {
  std::uint64_t num_devices = 200000;
  double radius_km = 2.0;
  double min_distance_km = 0.035;  ///< exclusion radius around the gNB
  std::uint64_t seed = 1;

  friend bool operator==(const DeploymentConfig&, const DeploymentConfig&) = default;
};

struct HataCoefficients {
  double a1_db = 0.0;
  double a2_db = 0.0;
};

/// Throws ConfigError unless 0 <= min_distance_km < radius_km.
void validate(const DeploymentConfig& cfg);

/// Throws ConfigError on non-positive frequency or heights.
void validate(const ChannelParams& ch);

/// Human-readable notes for parameters outside Hata's nominal validity
/// ranges (150-1500 MHz, 30-200 m, 1-10 m). Empty when all are in range.
std::vector<std::string> hata_range_warnings(const ChannelParams& ch);

/// Area-uniform positions over the annulus [min_distance_km, radius_km].
std::vector<Position> deploy(const DeploymentConfig& cfg, Rng& rng);

/// A1 and A2 of the urban Hata model:
///   A1 = 69.55 + 26.16 log10(f) - 13.82 log10(h_g) - (1.1 log10(f) - 0.7) h_d
///   A2 = 44.9 - 6.55 log10(h_g)
HataCoefficients hata_coefficients(const ChannelParams& ch);

/// PL = A1 + A2 log10(r), r in km. Throws DomainError for r <= 0.
double path_loss_db(const ChannelParams& ch, double r_km);

/// P_R = P_T - PL.
double received_power_dbm(const ChannelParams& ch, double r_km);

/// P_R plus a zero-mean Gaussian shadowing term of the given standard
/// deviation (dB). sigma == 0 consumes nothing from rng.
double received_power_dbm(const ChannelParams& ch, double r_km, double shadowing_sigma_db, Rng& rng);

}  // namespace rsra
