#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wigrec/phase.hpp"
#include "wigrec/sim.hpp"
#include "wigrec/wigner.hpp"

using namespace wigrec;

namespace {

constexpr double kPi = std::numbers::pi;

double fold(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return phi <= kPi ? phi : 2.0 * kPi - phi;
}

std::vector<double> cell_means(const ShotDataset& data, int i) {
  std::vector<double> means(data.config.phase_steps);
  for (int k = 0; k < data.config.phase_steps; ++k) {
    const auto& cell = data.cell(i, k, 0);
    double s = 0.0;
    for (double v : cell) s += v;
    means[k] = s / static_cast<double>(cell.size());
  }
  return means;
}

ExperimentConfig fringe_config(double beta0_mod, double intensity,
                               double overlap, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.signal_amplitude = {beta0_mod, 0.0};
  cfg.probe_intensities = {intensity};
  cfg.phase_steps = 48;
  cfg.eta_values = {0.31};
  cfg.eta_max = 0.31;
  cfg.gain = 0.1;
  cfg.overlap = overlap;
  cfg.shots_per_point = 30000;
  cfg.rng_seed = seed;
  return cfg;
}

// Probe modulus that realizes a target visibility on the dimmer branch:
// V = 2 sqrt(xi) x / (1 + x^2) with x = |beta| / |beta0|.
double dim_branch_amplitude(double v_target, double overlap,
                            double beta0_mod) {
  const double c = v_target / std::sqrt(overlap);
  const double x = (1.0 - std::sqrt(1.0 - c * c)) / c;
  return x * beta0_mod;
}

}  // namespace

TEST_CASE("analyze_fringe: five-point series") {
  const auto f = analyze_fringe({3.0, 2.0, 1.0, 2.0, 3.0});
  CHECK(f.visibility == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.offset == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-12));
  // The fringe is darkest where probe and signal interfere in phase, so the
  // low-voltage steps carry cos(phi) = +1.
  REQUIRE(f.cosines.size() == 5);
  CHECK(f.cosines[0] == doctest::Approx(-1.0));
  CHECK(f.cosines[1] == doctest::Approx(0.0));
  CHECK(f.cosines[2] == doctest::Approx(1.0));
  CHECK(f.cosines[3] == doctest::Approx(0.0));
  CHECK(f.cosines[4] == doctest::Approx(-1.0));
  CHECK(f.phases[0] == doctest::Approx(kPi));
  CHECK(f.phases[1] == doctest::Approx(kPi / 2));
  CHECK(f.phases[2] == doctest::Approx(0.0));
  CHECK(f.phases[3] == doctest::Approx(kPi / 2));
  CHECK(f.phases[4] == doctest::Approx(kPi));
}

TEST_CASE("analyze_fringe: invariants on the result") {
  const auto f = analyze_fringe({0.41, 0.13, 0.27, 0.35, 0.19});
  CHECK(f.visibility ==
        doctest::Approx(f.amplitude / f.offset).epsilon(1e-12));
  for (std::size_t k = 0; k < f.cosines.size(); ++k) {
    CHECK(f.cosines[k] >= -1.0);
    CHECK(f.cosines[k] <= 1.0);
    CHECK(f.phases[k] == doctest::Approx(std::acos(f.cosines[k])));
    CHECK(f.phases[k] >= 0.0);
    CHECK(f.phases[k] <= kPi);
  }
}

TEST_CASE("analyze_fringe: errors") {
  CHECK_THROWS_AS(analyze_fringe({1.0}), insufficient_data_error);
  CHECK_THROWS_AS(analyze_fringe({1.0, 1.0, 1.0}), no_fringe_error);
  CHECK_THROWS_AS(analyze_fringe({0.0, 0.0}), no_fringe_error);
}

TEST_CASE("analyze_fringe: noiseless analytic fringe needs no clipping") {
  // exact fringe sampled on a grid that contains both extrema
  const double gain = 0.1, b0 = 0.67, amp = 0.6, xi = 0.8;
  const int steps = 8;
  std::vector<double> v(steps), phi(steps);
  for (int k = 0; k < steps; ++k) {
    phi[k] = 2.0 * kPi * k / steps;
    v[k] = gain * (amp * amp + b0 * b0 -
                   2.0 * std::sqrt(xi) * amp * b0 * std::cos(phi[k]));
  }
  const auto f = analyze_fringe(v);
  for (int k = 0; k < steps; ++k) {
    CHECK(f.cosines[k] == doctest::Approx(std::cos(phi[k])).epsilon(1e-9));
    CHECK(f.phases[k] == doctest::Approx(fold(phi[k])).epsilon(1e-7));
  }
  const double v_expected =
      2.0 * std::sqrt(xi) * amp * b0 / (amp * amp + b0 * b0);
  CHECK(f.visibility == doctest::Approx(v_expected).epsilon(1e-12));
}

TEST_CASE("analyze_fringe: affine invariance") {
  const std::vector<double> base = {0.41, 0.13, 0.27, 0.35, 0.19};
  const auto f = analyze_fringe(base);

  auto doubled = base;
  for (auto& x : doubled) x *= 2.0;
  const auto f2 = analyze_fringe(doubled);
  CHECK(f2.visibility == f.visibility);  // exact for a power-of-two scale
  CHECK(f2.cosines == f.cosines);
  CHECK(f2.phases == f.phases);

  auto scaled = base;
  for (auto& x : scaled) x *= 3.7;
  const auto f3 = analyze_fringe(scaled);
  CHECK(f3.visibility == doctest::Approx(f.visibility).epsilon(1e-12));
  for (std::size_t k = 0; k < base.size(); ++k) {
    CHECK(f3.cosines[k] == doctest::Approx(f.cosines[k]).epsilon(1e-10));
  }
}

TEST_CASE("analyze_fringe: phase round trip against the simulator truth") {
  // equal intensities maximize the visibility at sqrt(overlap)
  const double b0 = 0.67;
  const auto cfg = fringe_config(b0, b0 * b0, 0.7569, 21);
  const auto data = generate_dataset(cfg, 2);
  const auto f = analyze_fringe(cell_means(data, 0));
  CHECK(f.visibility == doctest::Approx(0.87).epsilon(0.03));

  // drop the two steps nearest each extremum, where arccos is steepest
  std::vector<int> order(cfg.phase_steps);
  for (int k = 0; k < cfg.phase_steps; ++k) order[k] = k;
  auto near_low = order, near_high = order;
  std::sort(near_low.begin(), near_low.end(), [&](int a, int b) {
    return fold(data.true_phase(0, a)) < fold(data.true_phase(0, b));
  });
  std::sort(near_high.begin(), near_high.end(), [&](int a, int b) {
    return kPi - fold(data.true_phase(0, a)) <
           kPi - fold(data.true_phase(0, b));
  });
  std::vector<bool> excluded(cfg.phase_steps, false);
  excluded[near_low[0]] = excluded[near_low[1]] = true;
  excluded[near_high[0]] = excluded[near_high[1]] = true;

  double ss = 0.0;
  int used = 0;
  for (int k = 0; k < cfg.phase_steps; ++k) {
    if (excluded[k]) continue;
    const double err = f.phases[k] - fold(data.true_phase(0, k));
    ss += err * err;
    ++used;
  }
  CHECK(used == cfg.phase_steps - 4);
  CHECK(std::sqrt(ss / used) < 0.05);
}

TEST_CASE("analyze_fringe: published visibility triple as regression") {
  // three series, each at the probe intensity that realizes the listed
  // visibility for its signal amplitude
  const double overlap = 0.7569;  // equal-intensity visibility 0.87
  struct Series {
    double v_target, beta0;
  };
  const Series series[] = {{0.73, 0.70}, {0.77, 0.63}, {0.86, 0.67}};
  std::uint64_t seed = 31;
  for (const auto& s : series) {
    const double amp = dim_branch_amplitude(s.v_target, overlap, s.beta0);
    const auto cfg = fringe_config(s.beta0, amp * amp, overlap, seed++);
    const auto data = generate_dataset(cfg, 2);
    const auto f = analyze_fringe(cell_means(data, 0));
    CHECK(std::abs(f.visibility - s.v_target) < 0.03);
  }
}

TEST_CASE("overlap_from_visibility") {
  CHECK(overlap_from_visibility(0.87).xi ==
        doctest::Approx(0.7699).epsilon(1e-4));
  CHECK(overlap_from_visibility(1.0).xi == doctest::Approx(1.0));
  CHECK(overlap_from_visibility(0.0).xi == doctest::Approx(0.0));
  CHECK(overlap_from_visibility(0.5).v_max_used == 0.5);
  CHECK_THROWS_AS(overlap_from_visibility(-0.1), std::domain_error);
  CHECK_THROWS_AS(overlap_from_visibility(1.1), std::domain_error);
}

TEST_CASE("select_vmax: closest series and tie-break") {
  std::vector<FringeAnalysis> fringes(3);
  fringes[0].visibility = 0.4;
  fringes[1].visibility = 0.8;
  fringes[2].visibility = 0.6;

  const auto single = select_vmax({fringes[1]}, {0.5}, 0.9);
  CHECK(single.intensity_index == 0);
  CHECK(single.v_max == 0.8);

  const auto sel = select_vmax(fringes, {0.2, 0.45, 0.9}, 0.449);
  CHECK(sel.intensity_index == 1);
  CHECK(sel.v_max == 0.8);

  // exact tie resolves toward the brighter series
  std::vector<FringeAnalysis> two(2);
  two[0].visibility = 0.5;
  two[1].visibility = 0.3;
  const auto tie = select_vmax(two, {0.25, 0.75}, 0.5);
  CHECK(tie.intensity_index == 1);
  const auto offset_tie = select_vmax(two, {0.3, 0.6}, 0.45);
  CHECK(offset_tie.intensity_index == 1);
}

TEST_CASE("select_vmax: dedicated mode wants an exact equal-intensity run") {
  std::vector<FringeAnalysis> fringes(2);
  fringes[0].visibility = 0.5;
  fringes[1].visibility = 0.7;
  const auto sel =
      select_vmax(fringes, {0.3, 0.25}, 0.25, VmaxMode::dedicated);
  CHECK(sel.intensity_index == 1);
  CHECK(sel.v_max == 0.7);
  CHECK_THROWS_AS(select_vmax(fringes, {0.3, 0.26}, 0.25, VmaxMode::dedicated),
                  insufficient_data_error);
  CHECK_THROWS_AS(select_vmax({}, {}, 0.25), insufficient_data_error);
}

TEST_CASE("folded phases lose nothing for the symmetric target") {
  const TheoryParams params{0.67, 0.78};
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const double m = 2.0 * rng.uniform();
    const double phi = 2.0 * kPi * rng.uniform();
    const double up = theory_reduced(ComplexAmplitude::polar(m, phi), params);
    const double down =
        theory_reduced(ComplexAmplitude::polar(m, -phi), params);
    CHECK(up == down);
  }
}
