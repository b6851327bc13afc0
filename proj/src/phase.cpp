#include "wigrec/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wigrec {

FringeAnalysis analyze_fringe(const std::vector<double>& mean_voltages) {
  if (mean_voltages.size() < 2) {
    throw insufficient_data_error(
        "fringe analysis needs at least two phase steps, got " +
        std::to_string(mean_voltages.size()));
  }
  for (double v : mean_voltages) {
    if (!std::isfinite(v)) {
      throw insufficient_data_error("fringe analysis: non-finite mean voltage");
    }
  }

  const auto [min_it, max_it] =
      std::minmax_element(mean_voltages.begin(), mean_voltages.end());
  const double lo = *min_it;
  const double hi = *max_it;

  FringeAnalysis out;
  out.offset = 0.5 * (hi + lo);
  out.amplitude = 0.5 * (hi - lo);

  const double denom = hi + lo;
  if (!(denom > 0.0)) {
    throw no_fringe_error("fringe analysis: non-positive mean voltages");
  }
  out.visibility = (hi - lo) / denom;

  if (out.amplitude <= 0.0) {
    throw no_fringe_error("fringe analysis: flat series, no fringe to invert");
  }

  out.cosines.reserve(mean_voltages.size());
  out.phases.reserve(mean_voltages.size());
  for (double v : mean_voltages) {
    // Darkest at zero relative phase: cos(phi) rises as the voltage drops.
    double c = (out.offset - v) / out.amplitude;
    c = std::clamp(c, -1.0, 1.0);
    out.cosines.push_back(c);
    out.phases.push_back(std::acos(c));
  }
  return out;
}

OverlapEstimate overlap_from_visibility(double v_max) {
  if (!(v_max >= 0.0 && v_max <= 1.0)) {
    std::ostringstream msg;
    msg << "peak visibility must lie in [0, 1], got " << v_max;
    throw std::domain_error(msg.str());
  }
  OverlapEstimate out;
  out.v_max_used = v_max;
  out.xi = v_max / (2.0 - v_max);
  return out;
}

VmaxSelection select_vmax(const std::vector<FringeAnalysis>& fringes,
                          const std::vector<double>& probe_intensities,
                          double signal_intensity, VmaxMode mode) {
  if (fringes.size() != probe_intensities.size()) {
    throw std::invalid_argument("select_vmax: series/intensity count mismatch");
  }
  if (fringes.empty()) {
    throw insufficient_data_error("select_vmax: no fringe series");
  }

  std::size_t best = 0;
  bool found = false;
  if (mode == VmaxMode::dedicated) {
    for (std::size_t i = 0; i < probe_intensities.size(); ++i) {
      if (probe_intensities[i] == signal_intensity) {
        best = i;
        found = true;
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "no probe series at the signal intensity " << signal_intensity;
      throw insufficient_data_error(msg.str());
    }
  } else {
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probe_intensities.size(); ++i) {
      const double dist = std::abs(probe_intensities[i] - signal_intensity);
      // Ties break toward the brighter series.
      if (dist < best_dist ||
          (dist == best_dist && probe_intensities[i] > probe_intensities[best])) {
        best_dist = dist;
        best = i;
      }
    }
  }

  VmaxSelection out;
  out.intensity_index = best;
  out.v_max = fringes[best].visibility;
  return out;
}

}  // namespace wigrec
