#pragma once

#include <cstdint>
#include <random>

namespace wigrec {

/// Deterministic random stream. The engine is a standard mt19937_64 (whose
/// output sequence is pinned by the C++ standard) and all variate
/// transformations are implemented here, so identical seeds give identical
/// draws on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream for one simulation cell. The stream key mixes the
  /// run seed with the cell indices, so cells can be generated in any order
  /// or in parallel with schedule-independent results.
  static Rng for_cell(std::uint64_t seed, std::uint64_t intensity_idx,
                      std::uint64_t phase_idx, std::uint64_t eta_idx,
                      std::uint64_t tag);

  /// Uniform double in [0, 1).
  double uniform();

  /// Gaussian via Box-Muller (the spare deviate is cached).
  double gaussian(double mean, double sd);

  /// Exact Poisson deviate (Knuth product method, chunked so exp(-mean)
  /// never underflows).
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wigrec
