#include "wigrec/sim.hpp"

#include <cmath>
#include <sstream>

#include "wigrec/parallel.hpp"

namespace wigrec {

namespace {
constexpr std::uint64_t kPhaseTag = 0x50484153ull;  // "PHAS"
constexpr std::uint64_t kShotTag = 0x53484F54ull;   // "SHOT"
}  // namespace

void ExperimentConfig::validate() const {
  std::ostringstream oss;
  if (!signal_amplitude.is_finite()) oss << "signal_amplitude not finite; ";
  if (probe_intensities.empty()) oss << "probe_intensities empty; ";
  for (double I : probe_intensities) {
    if (!(I >= 0.0) || !std::isfinite(I)) {
      oss << "probe intensities must be finite and >= 0; ";
      break;
    }
  }
  if (phase_steps < 1) oss << "phase_steps must be >= 1; ";
  if (eta_values.empty()) {
    oss << "eta_values empty; ";
  } else {
    if (eta_values.front() != eta_max) oss << "first eta must equal eta_max; ";
    for (std::size_t j = 0; j < eta_values.size(); ++j) {
      const double eta = eta_values[j];
      if (!(eta > 0.0 && eta <= 1.0)) {
        oss << "eta values must lie in (0, 1]; ";
        break;
      }
      if (j > 0 && !(eta < eta_values[j - 1])) {
        oss << "eta values must be sorted descending; ";
        break;
      }
    }
  }
  if (!(eta_max > 0.0 && eta_max <= 1.0)) oss << "eta_max must lie in (0, 1]; ";
  if (!(gain > 0.0)) oss << "gain must be > 0; ";
  if (!(overlap >= 0.0 && overlap <= 1.0)) oss << "overlap must lie in [0, 1]; ";
  if (shots_per_point < 1) oss << "shots_per_point must be >= 1; ";
  if (!(electronic_noise_sd >= 0.0)) oss << "electronic_noise_sd must be >= 0; ";
  if (!(piezo_jitter_sd >= 0.0)) oss << "piezo_jitter_sd must be >= 0; ";
  const std::string msg = oss.str();
  if (!msg.empty()) throw config_error("invalid ExperimentConfig: " + msg);
}

double displaced_mean(ComplexAmplitude beta, ComplexAmplitude beta0, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw std::domain_error("displaced_mean: overlap xi must lie in [0, 1]");
  }
  const double root_xi = std::sqrt(xi);
  const ComplexAmplitude d = root_xi * beta - beta0;
  return (1.0 - xi) * beta.mod2() + d.mod2();
}

double sample_shot(double mean_detected, double gain, double noise_sd, Rng& rng) {
  if (!(mean_detected >= 0.0)) {
    throw std::domain_error("sample_shot: mean_detected must be >= 0");
  }
  if (!(gain > 0.0)) throw std::domain_error("sample_shot: gain must be > 0");
  if (!(noise_sd >= 0.0)) throw std::domain_error("sample_shot: noise_sd must be >= 0");
  double v = gain * static_cast<double>(rng.poisson(mean_detected));
  if (noise_sd > 0.0) v += rng.gaussian(0.0, noise_sd);
  return v;
}

double cell_true_phase(const ExperimentConfig& cfg, int i, int k) {
  const double nominal = 2.0 * M_PI * static_cast<double>(k) /
                         static_cast<double>(cfg.phase_steps);
  if (cfg.piezo_jitter_sd == 0.0) return nominal;
  Rng rng = Rng::for_cell(cfg.rng_seed, static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(k), 0, kPhaseTag);
  return nominal + rng.gaussian(0.0, cfg.piezo_jitter_sd);
}

std::vector<double> generate_cell(const ExperimentConfig& cfg, int i, int k, int e) {
  const double phi = cell_true_phase(cfg, i, k);
  const ComplexAmplitude beta =
      ComplexAmplitude::polar(std::sqrt(cfg.probe_intensities[i]), phi);
  const ComplexAmplitude beta0{cfg.signal_amplitude.mod(), 0.0};
  const double mu_eta_max = displaced_mean(beta, beta0, cfg.overlap);
  // Coherent fields stay Poissonian under loss, so the efficiency scan is a
  // pure rescaling of the detected mean: mean(eta) = (eta / eta_max) * mu.
  const double mean = cfg.eta_values[e] / cfg.eta_max * mu_eta_max;
  Rng rng = Rng::for_cell(cfg.rng_seed, static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(e), kShotTag);
  std::vector<double> voltages(static_cast<std::size_t>(cfg.shots_per_point));
  for (double& v : voltages) {
    v = sample_shot(mean, cfg.gain, cfg.electronic_noise_sd, rng);
  }
  return voltages;
}

ShotDataset generate_dataset(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  ShotDataset ds;
  ds.config = cfg;
  const int nI = cfg.n_intensities();
  const int K = cfg.phase_steps;
  const int nE = cfg.n_etas();
  ds.true_phases.resize(static_cast<std::size_t>(nI) * K);
  for (int i = 0; i < nI; ++i) {
    for (int k = 0; k < K; ++k) {
      ds.true_phases[static_cast<std::size_t>(i) * K + k] = cell_true_phase(cfg, i, k);
    }
  }
  const std::size_t n_cells = static_cast<std::size_t>(nI) * K * nE;
  ds.cells.resize(n_cells);
  parallel_for(n_cells, workers, [&](std::size_t idx) {
    const int e = static_cast<int>(idx % nE);
    const int k = static_cast<int>((idx / nE) % K);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nE) * K));
    ds.cells[idx] = generate_cell(cfg, i, k, e);
  });
  return ds;
}

}  // namespace wigrec
