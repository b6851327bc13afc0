#pragma once

#include <cstdint>
#include <vector>

#include "wigrec/rng.hpp"
#include "wigrec/types.hpp"

namespace wigrec {

/// Full description of one simulated acquisition: a coherent signal mixed
/// with a phase-stepped coherent probe on a beam splitter, detected through
/// an efficiency scan with linear gain.
///
/// Amplitudes and intensities are given in detected units at eta_max. The
/// probe phase grid is relative to the signal phase, so only the modulus of
/// signal_amplitude enters the detection model.
struct ExperimentConfig {
  ComplexAmplitude signal_amplitude;      ///< beta0 at eta_max
  std::vector<double> probe_intensities;  ///< |beta|^2 values at eta_max
  int phase_steps = 48;                   ///< probe phase steps per intensity
  std::vector<double> eta_values;         ///< descending, first equals eta_max
  double eta_max = 0.31;
  double gain = 0.1;                      ///< gamma, volts per detected photon
  double overlap = 1.0;                   ///< xi, signal-probe mode matching
  int shots_per_point = 30000;
  double electronic_noise_sd = 0.0;       ///< volts, additive gaussian
  std::uint64_t rng_seed = 1;
  double piezo_jitter_sd = 0.15;          ///< radians around the nominal grid

  int n_intensities() const { return static_cast<int>(probe_intensities.size()); }
  int n_etas() const { return static_cast<int>(eta_values.size()); }

  /// Throws config_error on any violated invariant.
  void validate() const;
};

/// One simulated run: per (intensity, phase, eta) cell a list of single-shot
/// voltages, plus the realized probe phases. The phases are ground truth for
/// round-trip testing only and must never feed the analysis.
struct ShotDataset {
  ExperimentConfig config;
  std::vector<std::vector<double>> cells;  ///< flat index, see cell_index()
  std::vector<double> true_phases;         ///< [i * phase_steps + k], radians

  std::size_t cell_index(int i, int k, int e) const {
    const auto K = static_cast<std::size_t>(config.phase_steps);
    const auto E = static_cast<std::size_t>(config.n_etas());
    return (static_cast<std::size_t>(i) * K + static_cast<std::size_t>(k)) * E +
           static_cast<std::size_t>(e);
  }
  const std::vector<double>& cell(int i, int k, int e) const {
    return cells[cell_index(i, k, e)];
  }
  double true_phase(int i, int k) const {
    return true_phases[static_cast<std::size_t>(i) * config.phase_steps + k];
  }
};

/// Mean detected photon number of the displaced state at probe point beta,
/// signal beta0, mode overlap xi:
///
///   mu = (1 - xi) |beta|^2 + |sqrt(xi) beta - beta0|^2
///
/// The residual (non-interfering) probe contributes the first term, the
/// interfering part the second; (2/pi) exp(-2 mu) is then the detected
/// Wigner value at beta.
double displaced_mean(ComplexAmplitude beta, ComplexAmplitude beta0, double xi);

/// One detector shot: Poisson photoelectron count at the given mean, scaled
/// by the gain, plus optional gaussian electronic noise.
double sample_shot(double mean_detected, double gain, double noise_sd, Rng& rng);

/// Realized probe phase of cell (i, k): nominal grid value 2 pi k / K plus
/// jitter drawn from the cell's own stream.
double cell_true_phase(const ExperimentConfig& cfg, int i, int k);

/// Voltages of one (intensity, phase, eta) cell. Pure function of
/// (config, indices); cells may be generated concurrently in any order.
std::vector<double> generate_cell(const ExperimentConfig& cfg, int i, int k, int e);

/// Generate the full dataset (optionally with a worker pool). Identical
/// (config, seed) give bit-identical datasets for any worker count.
ShotDataset generate_dataset(const ExperimentConfig& cfg, int workers = 1);

}  // namespace wigrec
