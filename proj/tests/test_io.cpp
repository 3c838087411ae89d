#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "birelay/io.hpp"
#include "helpers.hpp"

using namespace birelay;
using birelay::testing::seeded_instance;

TEST_CASE("instance JSON round trip is bit-identical") {
  const ProblemInstance inst = seeded_instance(123, 32, 17.5, 0.4, 1.25, 2.5);
  const nlohmann::json j = instance_to_json(inst);
  const ProblemInstance back = instance_from_json(j);
  CHECK(back.n() == inst.n());
  CHECK(back.w_a == inst.w_a);
  CHECK(back.w_b == inst.w_b);
  CHECK(back.r_a == inst.r_a);
  CHECK(back.r_b == inst.r_b);
  CHECK(back.p_a == inst.p_a);
  CHECK(back.p_b == inst.p_b);
  CHECK(back.p_r == inst.p_r);
  for (int l = 0; l < kNumLinks; ++l) {
    CHECK(back.channels.gains[l] == inst.channels.gains[l]);
  }
}

TEST_CASE("instance file round trip") {
  const ProblemInstance inst = seeded_instance(7, 16, 20.0);
  const std::string path =
      (std::filesystem::temp_directory_path() / "birelay_inst_test.json")
          .string();
  save_instance(inst, path);
  const ProblemInstance back = load_instance(path);
  for (int l = 0; l < kNumLinks; ++l) {
    CHECK(back.channels.gains[l] == inst.channels.gains[l]);
  }
  std::remove(path.c_str());
}

TEST_CASE("malformed instances are rejected on load") {
  nlohmann::json j = instance_to_json(seeded_instance(7, 16, 20.0));
  j["p"][0] = 0.0;
  CHECK_THROWS_AS(instance_from_json(j), InvariantViolation);
  j = instance_to_json(seeded_instance(7, 16, 20.0));
  j["gains"]["ar"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), InvariantViolation);
}

TEST_CASE("channel config JSON round trip") {
  ChannelConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.geometry = {0.0, 2.0, 0.6};
  cfg.seed = 99;
  cfg.shadowing_sigma_db = 4.0;
  cfg.rayleigh_fading = false;
  const ChannelConfig back = channel_config_from_json(channel_config_to_json(cfg));
  CHECK(back.n_subcarriers == cfg.n_subcarriers);
  CHECK(back.geometry.pos_r_km == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(back.shadowing_sigma_db == cfg.shadowing_sigma_db);
  CHECK(back.rayleigh_fading == cfg.rayleigh_fading);
  CHECK(back.taps.size() == cfg.taps.size());
}
