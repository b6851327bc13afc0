#include "wigrec/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace wigrec {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running key
  h += 0x9E3779B97F4A7C15ull * (v + 1);
  h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
  h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
  return h ^ (h >> 31);
}

}  // namespace

Rng Rng::for_cell(std::uint64_t seed, std::uint64_t intensity_idx,
                  std::uint64_t phase_idx, std::uint64_t eta_idx,
                  std::uint64_t tag) {
  std::uint64_t key = mix(seed, 0x4C454843ull);
  key = mix(key, intensity_idx);
  key = mix(key, phase_idx);
  key = mix(key, eta_idx);
  key = mix(key, tag);
  return Rng(key);
}

double Rng::uniform() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian(double mean, double sd) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sd * spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return mean + sd * r * std::cos(theta);
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("Rng::poisson: mean must be nonnegative");
  }
  if (mean == 0.0) return 0;
  std::uint64_t total = 0;
  // Poisson(a + b) = Poisson(a) + Poisson(b) for independent chunks.
  while (mean > 32.0) {
    mean -= 32.0;
    const double threshold = std::exp(-32.0);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > threshold);
    total += k - 1;
  }
  const double threshold = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > threshold);
  return total + k - 1;
}

}  // namespace wigrec
