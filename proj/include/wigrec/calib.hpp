#pragma once

#include <vector>

#include "wigrec/types.hpp"

namespace wigrec {

/// Voltage statistics of one efficiency setting.
struct FanoPoint {
  double mean_voltage = 0.0;  ///< volts
  double fano = 0.0;          ///< unbiased variance / mean, volts
  long shot_count = 0;
};

/// Fitted Fano-factor line F_v = slope * v + gamma.
struct CalibrationResult {
  double gamma = 0.0;         ///< intercept, volts per detected photon
  double slope = 0.0;         ///< Q / n_bar, dimensionless
  double residual_rms = 0.0;  ///< volts
  int points_used = 0;
};

/// Normalized detected-photon distribution p_m, m = 0..m_max.
struct PhotonHistogram {
  std::vector<double> probs;
  double mean = 0.0;      ///< sum of m * p_m
  long total_shots = 0;   ///< 0 for analytic distributions

  int m_max() const { return static_cast<int>(probs.size()) - 1; }
  /// Throws if normalization or the mean identity is violated beyond 1e-12.
  void validate() const;
};

/// Exclusion thresholds for degenerate efficiency groups. The round-off
/// floor on the mean voltage always applies in addition.
struct FanoThresholds {
  long min_shots = 2;
  double min_mean_voltage = 0.0;  ///< volts
};

/// fano_points() output: the usable points plus the eta indices dropped as
/// degenerate.
struct FanoExtraction {
  std::vector<FanoPoint> points;
  std::vector<int> excluded;
};

/// Per-eta voltage statistics for one probe setting. Groups are given in
/// scan order; excluded groups keep their index in `excluded`.
FanoExtraction fano_points(const std::vector<std::vector<double>>& eta_groups,
                           const FanoThresholds& thresholds = {});

/// Weighted least-squares line through the Fano points (weights proportional
/// to shot counts). The intercept is the gain.
CalibrationResult fit_gamma(const std::vector<FanoPoint>& points);

/// Histogram of detected photons: each voltage goes to the nearest integer
/// multiple of gamma, m = floor(v / gamma + 1/2), clamped at 0.
PhotonHistogram rebin(const std::vector<double>& voltages, double gamma);

/// Exact binomial thinning of a photon-number distribution by efficiency eta.
PhotonHistogram bernoulli_convolve(const PhotonHistogram& p, double eta);

/// Analytic Poisson distribution truncated once the residual mass drops
/// below `tail`.
PhotonHistogram poisson_histogram(double mean, double tail = 1e-12);

}  // namespace wigrec
