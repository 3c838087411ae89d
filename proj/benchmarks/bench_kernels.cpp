// Timing comparison of the serial and OpenMP paths: the per-subcarrier
// profit kernel at several N, and a batch of full solves across trials.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "birelay/experiments.hpp"
#include "birelay/solver.hpp"

using namespace birelay;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

ProblemInstance instance_for(int n, std::uint64_t seed) {
  ChannelConfig cfg;
  cfg.n_subcarriers = n;
  cfg.geometry = {0.0, 2.0, 1.0};
  cfg.seed = seed;
  ProblemInstance inst;
  inst.channels = generate_channels(cfg);
  inst.p_a = inst.p_b = inst.p_r = 100.0;
  inst.r_a = inst.r_b = 5.0;
  return inst;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("inner_maximize kernel (one dual evaluation)\n");
  std::printf("%8s %12s %12s %8s\n", "N", "serial ms", "omp ms", "speedup");
  for (int n : {256, 1024, 4096, 16384}) {
    const ProblemInstance inst = instance_for(n, 42);
    const SchemeMask mask = scheme_mask(Scheme::Proposed);
    const DualInit init = initial_dual(inst, mask, 1e-8);
    const int reps = n <= 1024 ? 200 : 20;
    const double serial = time_ms(
        [&] { inner_maximize(inst, init.point, mask, false); }, reps);
    const double parallel = time_ms(
        [&] { inner_maximize(inst, init.point, mask, true); }, reps);
    std::printf("%8d %12.3f %12.3f %7.2fx\n", n, serial, parallel,
                serial / parallel);
  }

  std::printf("\ntrial batch (sweep engine, N=256, 8 trials, proposed)\n");
  ScenarioConfig cfg;
  cfg.schemes = {Scheme::Proposed};
  cfg.snr_db = {20.0};
  cfg.n_trials = 8;
  cfg.qos_points = {{5.0, 5.0}};
  cfg.channel.n_subcarriers = 256;
  cfg.channel.geometry = {0.0, 2.0, 1.0};
  cfg.master_seed = 7;
  cfg.solver.iter_cap = 800;

  cfg.threads = 1;
  const auto t0 = clock_type::now();
  sweep(cfg);
  const auto t1 = clock_type::now();
  cfg.threads = 0;  // all cores
  const auto t2 = clock_type::now();
  sweep(cfg);
  const auto t3 = clock_type::now();
  const double serial_s = std::chrono::duration<double>(t1 - t0).count();
  const double parallel_s = std::chrono::duration<double>(t3 - t2).count();
  std::printf("%8s %12.3f s\n%8s %12.3f s  (%.2fx)\n", "serial", serial_s,
              "omp", parallel_s, serial_s / parallel_s);
  return 0;
}
