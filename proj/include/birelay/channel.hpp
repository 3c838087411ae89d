#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "birelay/types.hpp"

namespace birelay {

struct NonPositiveDistance : std::domain_error {
  using std::domain_error::domain_error;
};
struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Power-law path loss with reference gain 1 at d = 1 km. Throws
/// NonPositiveDistance for d <= 0.
double pathloss_gain(double distance_km, double exponent);

/// One multipath tap: integer sample delay and mean power in dB relative to
/// the strongest tap. Tap powers are normalized to unit linear sum before
/// the path loss is applied.
struct Tap {
  int delay_samples = 0;
  double power_db = 0.0;
};

/// Stand-in for the SUI-6 three-tap profile; relative powers and delays are
/// configurable since the exact parameterization is deployment-specific.
std::vector<Tap> default_tap_profile();

struct ChannelConfig {
  NodeGeometry geometry;
  int n_subcarriers = 256;
  double pathloss_exponent = 3.5;
  std::vector<Tap> taps = default_tap_profile();
  std::uint64_t seed = 0;
  bool reciprocal = true;
  /// Log-normal shadowing std-dev in dB; 0 disables shadowing.
  double shadowing_sigma_db = 0.0;
  /// Test hook: false replaces the Rayleigh tap draws with deterministic
  /// sqrt(tap power) amplitudes (flat |H| for a single tap at delay 0).
  bool rayleigh_fading = true;
};

void validate_channel_config(const ChannelConfig& cfg);

/// Draws one frequency-selective fading frame. Deterministic in the seed;
/// each directed link uses an independent substream keyed on (seed, link),
/// so changing N or adding links never perturbs another link's taps.
/// With reciprocal=true the A<->B, A<->R, B<->R pairs share one draw.
ChannelRealization generate_channels(const ChannelConfig& cfg);

/// 64-bit mix used for substream derivation and trial seeding (splitmix64
/// finalizer). Stable across platforms.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);

}  // namespace birelay
