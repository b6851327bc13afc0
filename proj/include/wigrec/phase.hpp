#pragma once

#include <cstddef>
#include <vector>

#include "wigrec/types.hpp"

namespace wigrec {

/// Fringe parameters and per-step phases recovered from a mean-voltage
/// series at the top of the efficiency scan.
struct FringeAnalysis {
  double visibility = 0.0;      ///< (max - min) / (max + min)
  double offset = 0.0;          ///< (max + min) / 2, volts
  double amplitude = 0.0;       ///< (max - min) / 2, volts
  std::vector<double> cosines;  ///< cos(phi) per step, clipped to [-1, 1]
  std::vector<double> phases;   ///< arccos(cosine), in [0, pi]
};

/// Mode overlap inferred from the peak visibility.
struct OverlapEstimate {
  double xi = 0.0;
  double v_max_used = 0.0;
};

/// How the peak-visibility series is chosen among the probe intensities.
enum class VmaxMode {
  closest,    ///< series whose |beta|^2 is nearest the signal intensity
  dedicated,  ///< require a series at exactly the signal intensity
};

/// Chosen peak-visibility series.
struct VmaxSelection {
  std::size_t intensity_index = 0;
  double v_max = 0.0;
};

/// Recover visibility, fringe offset/amplitude and per-step phases from the
/// mean voltages of one intensity series.
///
/// The displaced-state fringe is darkest where probe and signal are in
/// phase, so the cosine of the probe phase is (offset - v) / amplitude.
FringeAnalysis analyze_fringe(const std::vector<double>& mean_voltages);

/// xi = V_max / (2 - V_max).
OverlapEstimate overlap_from_visibility(double v_max);

/// Pick the series that provides V_max. In closest mode ties break toward
/// the larger intensity; dedicated mode throws insufficient_data_error when
/// no series sits at the signal intensity.
VmaxSelection select_vmax(const std::vector<FringeAnalysis>& fringes,
                          const std::vector<double>& probe_intensities,
                          double signal_intensity,
                          VmaxMode mode = VmaxMode::closest);

}  // namespace wigrec
