#include <random>

#include <benchmark/benchmark.h>

#include "rankone/cauchy.hpp"
#include "rankone/clark.hpp"
#include "rankone/model.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"
#include "rankone/representation.hpp"

namespace {

void bm_boundary_schedule_atomic(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const rankone::Measure mu =
      rankone::random_atomic_circle(rng, static_cast<int>(state.range(0)));
  const rankone::Samples ones = rankone::ones_samples(mu);
  const rankone::BoundaryGrid grid(1 << 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::boundary_values_on_grid(
        mu, ones, grid, rankone::BoundarySide::plus));
  }
}
BENCHMARK(bm_boundary_schedule_atomic)->Arg(4)->Arg(16)->Arg(64);

void bm_boundary_schedule_ac_fft(benchmark::State& state) {
  const rankone::Measure mu = rankone::lebesgue_grid(1 << 12);
  std::mt19937_64 rng(7);
  const rankone::Samples f = rankone::random_samples(rng, mu);
  const rankone::BoundaryGrid grid(1 << 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::boundary_values_on_grid(
        mu, f, grid, rankone::BoundarySide::plus));
  }
}
BENCHMARK(bm_boundary_schedule_ac_fft);

void bm_phi_star_universal(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const rankone::Measure mu =
      rankone::random_atomic_circle(rng, static_cast<int>(state.range(0)));
  const rankone::ClarkContext ctx =
      rankone::make_clark_context(mu, rankone::cplx(0.3, 0.1));
  const rankone::Samples f = rankone::random_samples(rng, mu);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::phi_star_universal(ctx, f));
  }
}
BENCHMARK(bm_phi_star_universal)->Arg(4)->Arg(16);

void bm_spectral_measure(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const rankone::Measure mu =
      rankone::random_atomic_line(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::spectral_measure_perturbed(
        rankone::SelfAdjointFamily{mu, 1.0}));
  }
}
BENCHMARK(bm_spectral_measure)->Arg(32)->Arg(128);

void bm_build_v_alpha(benchmark::State& state) {
  std::mt19937_64 rng(17);
  const rankone::Measure mu =
      rankone::random_atomic_line(rng, static_cast<int>(state.range(0)));
  const rankone::Measure mu_a = rankone::spectral_measure_perturbed(
      rankone::SelfAdjointFamily{mu, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::build_V_alpha(mu, mu_a, 1.0));
  }
}
BENCHMARK(bm_build_v_alpha)->Arg(32)->Arg(128);

void bm_theta_boundary(benchmark::State& state) {
  std::mt19937_64 rng(19);
  const rankone::Measure mu = rankone::random_atomic_circle(rng, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankone::char_function_boundary(
        mu, rankone::cplx(0.2, 0.4), 1 << static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_theta_boundary)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
