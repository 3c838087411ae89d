#include "birelay/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace birelay {

double pathloss_gain(double distance_km, double exponent) {
  if (!(distance_km > 0.0)) {
    throw NonPositiveDistance("pathloss_gain: distance must be > 0 km");
  }
  return std::pow(distance_km, -exponent);
}

std::vector<Tap> default_tap_profile() {
  return {{0, 0.0}, {5, -10.0}, {10, -14.0}};
}

void validate_channel_config(const ChannelConfig& cfg) {
  validate_geometry(cfg.geometry);
  if (cfg.n_subcarriers <= 0) throw InvalidConfig("n_subcarriers must be > 0");
  if (!(cfg.pathloss_exponent > 0.0)) {
    throw InvalidConfig("pathloss_exponent must be > 0");
  }
  if (cfg.taps.empty()) throw InvalidConfig("tap profile must be nonempty");
  if (static_cast<int>(cfg.taps.size()) > cfg.n_subcarriers) {
    throw InvalidConfig("more taps than subcarriers");
  }
  for (const auto& t : cfg.taps) {
    if (t.delay_samples < 0) throw InvalidConfig("negative tap delay");
    if (!std::isfinite(t.power_db)) throw InvalidConfig("non-finite tap power");
  }
  if (!(cfg.shadowing_sigma_db >= 0.0)) {
    throw InvalidConfig("shadowing sigma must be >= 0");
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

namespace {

// Deterministic standard normal via Box-Muller on mt19937_64; avoids the
// implementation-defined std::normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  double uniform01() {
    return (rng_() >> 11) * 0x1.0p-53;  // 53 random bits in [0,1)
  }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct LinkSpec {
  Link link;
  double distance_km;
  // Substream identity; reciprocal pairs share the canonical id.
  int stream_id;
};

std::vector<double> draw_link_gains(const ChannelConfig& cfg,
                                    std::uint64_t substream_seed,
                                    double pathloss) {
  const int n = cfg.n_subcarriers;
  GaussianStream gauss(substream_seed);

  // Normalize tap powers to unit linear sum.
  double linear_sum = 0.0;
  for (const auto& t : cfg.taps) linear_sum += std::pow(10.0, t.power_db / 10.0);

  std::vector<std::complex<double>> coeff(cfg.taps.size());
  for (size_t t = 0; t < cfg.taps.size(); ++t) {
    const double p = std::pow(10.0, cfg.taps[t].power_db / 10.0) / linear_sum;
    if (cfg.rayleigh_fading) {
      const double s = std::sqrt(p / 2.0);
      const double re = gauss.next();
      const double im = gauss.next();
      coeff[t] = {s * re, s * im};
    } else {
      coeff[t] = {std::sqrt(p), 0.0};
    }
  }

  double shadow = 1.0;
  if (cfg.shadowing_sigma_db > 0.0) {
    shadow = std::pow(10.0, cfg.shadowing_sigma_db * gauss.next() / 10.0);
  }

  std::vector<double> out(n);
  const double scale = pathloss * shadow;
  for (int k = 0; k < n; ++k) {
    std::complex<double> h{0.0, 0.0};
    for (size_t t = 0; t < cfg.taps.size(); ++t) {
      const double phase = -2.0 * std::numbers::pi *
                           double(k) * double(cfg.taps[t].delay_samples) / double(n);
      h += coeff[t] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out[k] = std::norm(h) * scale;
  }
  return out;
}

}  // namespace

ChannelRealization generate_channels(const ChannelConfig& cfg) {
  validate_channel_config(cfg);

  const double d_ab = cfg.geometry.dist_ab_km();
  const double d_ar = cfg.geometry.dist_ar_km();
  const double d_br = cfg.geometry.dist_br_km();

  // Canonical substream ids: AB=0, AR=1, BR=2; the reverse directions get
  // their own ids 3..5 only when reciprocity is off.
  const LinkSpec canonical[3] = {
      {Link::AB, d_ab, 0}, {Link::AR, d_ar, 1}, {Link::BR, d_br, 2}};
  const LinkSpec mirrors[3] = {
      {Link::BA, d_ab, 3}, {Link::RA, d_ar, 4}, {Link::RB, d_br, 5}};

  ChannelRealization ch;
  ch.n_subcarriers = cfg.n_subcarriers;
  for (int i = 0; i < 3; ++i) {
    const auto& spec = canonical[i];
    const std::uint64_t sub = hash_combine(cfg.seed, std::uint64_t(spec.stream_id));
    ch.link(spec.link) = draw_link_gains(
        cfg, sub, pathloss_gain(spec.distance_km, cfg.pathloss_exponent));
  }
  for (int i = 0; i < 3; ++i) {
    const auto& spec = mirrors[i];
    if (cfg.reciprocal) {
      ch.link(spec.link) = ch.link(canonical[i].link);
    } else {
      const std::uint64_t sub =
          hash_combine(cfg.seed, std::uint64_t(spec.stream_id));
      ch.link(spec.link) = draw_link_gains(
          cfg, sub, pathloss_gain(spec.distance_km, cfg.pathloss_exponent));
    }
  }
  return ch;
}

}  // namespace birelay
