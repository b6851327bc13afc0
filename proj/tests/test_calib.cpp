#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "wigrec/calib.hpp"
#include "wigrec/rng.hpp"
#include "wigrec/sim.hpp"

using namespace wigrec;

namespace {

std::vector<double> poisson_voltages(double mean, double gain, int n,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = gain * static_cast<double>(rng.poisson(mean));
  return v;
}

// Single-mode thermal light has a geometric photon-number law; thinning by
// eta keeps it geometric with mean eta * nbar.
std::vector<double> thermal_voltages(double mean, double gain, int n,
                                     std::mt19937& rng) {
  std::geometric_distribution<long> dist(1.0 / (1.0 + mean));
  std::vector<double> v(n);
  for (auto& x : v) x = gain * static_cast<double>(dist(rng));
  return v;
}

double fano_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1) / m;
}

double tvd(const PhotonHistogram& a, const PhotonHistogram& b) {
  const std::size_t n = std::max(a.probs.size(), b.probs.size());
  double d = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double pa = m < a.probs.size() ? a.probs[m] : 0.0;
    const double pb = m < b.probs.size() ? b.probs[m] : 0.0;
    d += std::abs(pa - pb);
  }
  return 0.5 * d;
}

}  // namespace

TEST_CASE("fano_points: constant, degenerate and missing groups") {
  const auto out = fano_points({{0.1, 0.1, 0.1, 0.1}});
  REQUIRE(out.points.size() == 1);
  CHECK(out.points[0].mean_voltage == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(out.points[0].fano == 0.0);
  CHECK(out.points[0].shot_count == 4);

  const auto mixed = fano_points({{0.1, 0.3}, {0.0, 0.0, 0.0}, {0.2}});
  CHECK(mixed.points.size() == 1);
  CHECK(mixed.excluded == std::vector<int>{1, 2});

  CHECK_THROWS_AS(fano_points({}), insufficient_data_error);
  CHECK_THROWS_AS(fano_points({{0.0, 0.0}, {}}), insufficient_data_error);
}

TEST_CASE("fano_points: configurable exclusion thresholds") {
  FanoThresholds thr;
  thr.min_shots = 4;
  const auto out = fano_points({{0.1, 0.2, 0.3}, {0.1, 0.2, 0.3, 0.4}}, thr);
  CHECK(out.points.size() == 1);
  CHECK(out.excluded == std::vector<int>{0});

  FanoThresholds floor_thr;
  floor_thr.min_mean_voltage = 0.05;
  const auto low = fano_points({{0.01, 0.03}, {0.1, 0.3}}, floor_thr);
  CHECK(low.points.size() == 1);
  CHECK(low.excluded == std::vector<int>{0});
}

TEST_CASE("fano_points: Poisson voltages give the gain, resampled spread") {
  const double gain = 0.1, mean = 2.0;
  const int shots = 30000;
  // spread oracle: independent replicas of the same statistic
  std::vector<double> replicas(20);
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    replicas[r] = fano_of(poisson_voltages(mean, gain, shots, 100 + r));
  }
  double rm = 0.0;
  for (double f : replicas) rm += f;
  rm /= static_cast<double>(replicas.size());
  double rss = 0.0;
  for (double f : replicas) rss += (f - rm) * (f - rm);
  const double sigma =
      std::sqrt(rss / static_cast<double>(replicas.size() - 1));

  const auto out = fano_points({poisson_voltages(mean, gain, shots, 1)});
  REQUIRE(out.points.size() == 1);
  CHECK(std::abs(out.points[0].fano - gain) < 3.0 * sigma);
}

TEST_CASE("fit_gamma: exact line") {
  std::vector<FanoPoint> pts;
  for (double v : {0.1, 0.2, 0.4, 0.8}) {
    pts.push_back({v, 0.31 * v + 0.1, 1000});
  }
  const auto res = fit_gamma(pts);
  CHECK(res.gamma == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(res.slope == doctest::Approx(0.31).epsilon(1e-12));
  CHECK(res.residual_rms == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(res.points_used == 4);
}

TEST_CASE("fit_gamma: degenerate inputs") {
  std::vector<FanoPoint> two = {{0.1, 0.2, 10}, {0.2, 0.3, 10}};
  CHECK_THROWS_AS(fit_gamma(two), insufficient_data_error);

  // three points but only two distinct mean voltages
  std::vector<FanoPoint> dup = {{0.1, 0.2, 10}, {0.1, 0.21, 10}, {0.2, 0.3, 10}};
  CHECK_THROWS_AS(fit_gamma(dup), insufficient_data_error);

  // negative intercept carries diagnostics in the message
  std::vector<FanoPoint> falling;
  for (double v : {0.1, 0.2, 0.3}) falling.push_back({v, 0.5 * v - 0.06, 10});
  CHECK_THROWS_WITH_AS(fit_gamma(falling),
                       doctest::Contains("gamma="), calibration_error);
}

TEST_CASE("fit_gamma: heavier points dominate the fit") {
  // outlier with negligible weight barely moves the line
  std::vector<FanoPoint> pts;
  for (double v : {0.1, 0.2, 0.4}) pts.push_back({v, 0.2 * v + 0.1, 100000});
  pts.push_back({0.3, 1.0, 1});
  const auto res = fit_gamma(pts);
  CHECK(res.gamma == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(res.slope == doctest::Approx(0.2).epsilon(2e-2));
}

TEST_CASE("fit_gamma: scale consistency") {
  std::vector<FanoPoint> pts;
  Rng rng(9);
  for (int j = 0; j < 8; ++j) {
    const double v = 0.05 * (j + 1);
    pts.push_back({v, 0.12 * v + 0.07 + 0.001 * rng.gaussian(0.0, 1.0),
                   1000 + 13 * j});
  }
  const auto base = fit_gamma(pts);

  auto doubled = pts;
  for (auto& p : doubled) {
    p.mean_voltage *= 2.0;
    p.fano *= 2.0;
  }
  const auto res2 = fit_gamma(doubled);
  CHECK(res2.gamma == 2.0 * base.gamma);  // exact for a power-of-two scale
  CHECK(res2.slope == base.slope);

  auto scaled = pts;
  for (auto& p : scaled) {
    p.mean_voltage *= 3.7;
    p.fano *= 3.7;
  }
  const auto res3 = fit_gamma(scaled);
  CHECK(res3.gamma == doctest::Approx(3.7 * base.gamma).epsilon(1e-12));
  CHECK(res3.slope == doctest::Approx(base.slope).epsilon(1e-12));
}

TEST_CASE("fit_gamma: Poisson light round trip across an efficiency scan") {
  const double gain = 0.1, top_mean = 2.0;
  std::vector<std::vector<double>> groups;
  for (int e = 0; e < 25; ++e) {
    const double eta_frac = (25.0 - e) / 25.0;
    groups.push_back(
        poisson_voltages(top_mean * eta_frac, gain, 30000, 500 + e));
  }
  const auto res = fit_gamma(fano_points(groups).points);
  CHECK(std::abs(res.gamma - gain) < 0.02 * gain);
  CHECK(std::abs(res.slope) < 0.02);
}

TEST_CASE("fit_gamma: thermal light slope is one") {
  const double gain = 0.1, nbar = 1.0;
  std::mt19937 rng(2024);
  std::vector<std::vector<double>> groups;
  for (int e = 0; e < 25; ++e) {
    const double eta_frac = (25.0 - e) / 25.0;
    groups.push_back(thermal_voltages(nbar * eta_frac, gain, 30000, rng));
  }
  const auto res = fit_gamma(fano_points(groups).points);
  CHECK(std::abs(res.slope - 1.0) < 0.05);
  CHECK(res.gamma == doctest::Approx(gain).epsilon(0.1));
}

TEST_CASE("rebin: exact assignments") {
  const auto zeros = rebin({0.0, 0.0, 0.0}, 0.1);
  REQUIRE(zeros.probs.size() == 1);
  CHECK(zeros.probs[0] == 1.0);
  CHECK(zeros.mean == 0.0);
  CHECK(zeros.total_shots == 3);
  CHECK_NOTHROW(zeros.validate());

  const auto thirds = rebin({0.02, 0.09, 0.19}, 0.1);
  REQUIRE(thirds.probs.size() == 3);
  CHECK(thirds.probs[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(thirds.probs[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(thirds.probs[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(thirds.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(thirds.validate());

  // negative voltages (noise) clamp into the lowest bin
  const auto clamped = rebin({-0.3, -0.06, 0.06}, 0.1);
  CHECK(clamped.probs[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(clamped.probs[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  CHECK_THROWS_AS(rebin({0.1}, 0.0), std::domain_error);
}

TEST_CASE("rebin: noisy voltages still recover the Poisson law") {
  const double gain = 0.1, mean = 2.0;
  const int shots = 30000;
  Rng rng(77);
  std::vector<double> v(shots);
  for (auto& x : v) {
    x = gain * static_cast<double>(rng.poisson(mean)) +
        rng.gaussian(0.0, 0.2 * gain);
  }
  const auto hist = rebin(v, gain);
  CHECK_NOTHROW(hist.validate());
  CHECK(tvd(hist, poisson_histogram(mean)) < 0.02);
}

TEST_CASE("rebin round trip: noiseless sampling distribution") {
  const double gain = 0.1, mean = 1.3;
  Rng rng(78);
  std::vector<double> v(30000);
  for (auto& x : v) x = sample_shot(mean, gain, 0.0, rng);
  CHECK(tvd(rebin(v, gain), poisson_histogram(mean)) < 0.02);
}

TEST_CASE("bernoulli_convolve: exact small cases") {
  PhotonHistogram one;
  one.probs = {0.0, 1.0};
  one.mean = 1.0;
  const auto thinned = bernoulli_convolve(one, 0.31);
  REQUIRE(thinned.probs.size() == 2);
  CHECK(thinned.probs[0] == doctest::Approx(0.69).epsilon(1e-12));
  CHECK(thinned.probs[1] == doctest::Approx(0.31).epsilon(1e-12));
  CHECK(thinned.mean == doctest::Approx(0.31).epsilon(1e-12));

  const auto same = bernoulli_convolve(one, 1.0);
  CHECK(same.probs == one.probs);

  const auto vacuum = bernoulli_convolve(one, 0.0);
  CHECK(vacuum.probs[0] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(bernoulli_convolve(one, -0.1), std::domain_error);
  CHECK_THROWS_AS(bernoulli_convolve(one, 1.1), std::domain_error);
}

TEST_CASE("bernoulli_convolve: Poisson thinning identity") {
  const auto in = poisson_histogram(2.0);
  const auto out = bernoulli_convolve(in, 0.5);
  const auto expect = poisson_histogram(1.0);
  const std::size_t n = std::min(out.probs.size(), expect.probs.size());
  REQUIRE(n > 5);
  for (std::size_t m = 0; m < n; ++m) {
    CHECK(std::abs(out.probs[m] - expect.probs[m]) < 1e-12);
  }
}

TEST_CASE("bernoulli_convolve: Poisson invariance over the scan grid") {
  for (double mu : {0.5, 2.0, 5.0}) {
    for (double eta : {0.31, 0.5, 0.9}) {
      const auto out = bernoulli_convolve(poisson_histogram(mu), eta);
      const auto expect = poisson_histogram(mu * eta);
      const std::size_t n = std::min(out.probs.size(), expect.probs.size());
      for (std::size_t m = 0; m < n; ++m) {
        CHECK(std::abs(out.probs[m] - expect.probs[m]) < 1e-10);
      }
      CHECK(out.mean == doctest::Approx(mu * eta).epsilon(1e-9));
    }
  }
}

TEST_CASE("constructed histograms keep their invariants") {
  for (double mu : {0.0, 0.7, 3.2}) {
    CHECK_NOTHROW(poisson_histogram(mu).validate());
  }
  Rng rng(12);
  std::vector<double> v(5000);
  for (auto& x : v) x = sample_shot(1.7, 0.1, 0.0, rng);
  const auto hist = rebin(v, 0.1);
  CHECK_NOTHROW(hist.validate());
  CHECK_NOTHROW(bernoulli_convolve(hist, 0.4).validate());
}
