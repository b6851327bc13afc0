#include "wigrec/calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wigrec {

void PhotonHistogram::validate() const {
  double sum = 0.0;
  double m1 = 0.0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const double p = probs[m];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::logic_error("PhotonHistogram: probability outside [0, 1]");
    }
    sum += p;
    m1 += static_cast<double>(m) * p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::logic_error("PhotonHistogram: probabilities do not sum to 1");
  }
  if (std::abs(m1 - mean) > 1e-12 * std::max(1.0, m1)) {
    throw std::logic_error("PhotonHistogram: stored mean inconsistent");
  }
}

FanoExtraction fano_points(const std::vector<std::vector<double>>& eta_groups,
                           const FanoThresholds& thresholds) {
  FanoExtraction out;
  const long min_shots = std::max(2L, thresholds.min_shots);
  for (std::size_t g = 0; g < eta_groups.size(); ++g) {
    const auto& v = eta_groups[g];
    const auto n = static_cast<long>(v.size());
    if (n < min_shots) {
      out.excluded.push_back(static_cast<int>(g));
      continue;
    }
    double sum = 0.0;
    double peak = 0.0;
    for (double x : v) {
      sum += x;
      peak = std::max(peak, std::abs(x));
    }
    const double mean = sum / static_cast<double>(n);
    // degenerate mean: at or below the round-off floor of the group
    const double floor_v = std::max(
        thresholds.min_mean_voltage,
        10.0 * std::numeric_limits<double>::epsilon() * peak);
    if (mean <= floor_v) {
      out.excluded.push_back(static_cast<int>(g));
      continue;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n - 1);
    out.points.push_back({mean, var / mean, n});
  }
  if (out.points.empty() && eta_groups.empty()) {
    throw insufficient_data_error("fano_points: no eta groups supplied");
  }
  if (out.points.empty()) {
    throw insufficient_data_error("fano_points: every eta group was degenerate");
  }
  return out;
}

CalibrationResult fit_gamma(const std::vector<FanoPoint>& points) {
  // distinct mean voltages, with a tolerance relative to the scan range
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.mean_voltage);
  std::sort(xs.begin(), xs.end());
  const double scale = xs.empty() ? 0.0 : std::max(1e-300, xs.back());
  int distinct = xs.empty() ? 0 : 1;
  for (std::size_t j = 1; j < xs.size(); ++j) {
    if (xs[j] - xs[j - 1] > 1e-12 * scale) ++distinct;
  }
  if (distinct < 3) {
    throw insufficient_data_error(
        "fit_gamma: need at least 3 Fano points with distinct mean voltages");
  }

  double W = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    const double w = static_cast<double>(p.shot_count);
    W += w;
    sx += w * p.mean_voltage;
    sy += w * p.fano;
  }
  const double xbar = sx / W;
  const double ybar = sy / W;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double w = static_cast<double>(p.shot_count);
    const double dx = p.mean_voltage - xbar;
    sxx += w * dx * dx;
    sxy += w * dx * (p.fano - ybar);
  }
  CalibrationResult res;
  res.slope = sxy / sxx;
  res.gamma = ybar - res.slope * xbar;
  res.points_used = static_cast<int>(points.size());
  double wss = 0.0;
  for (const auto& p : points) {
    const double r = p.fano - (res.slope * p.mean_voltage + res.gamma);
    wss += static_cast<double>(p.shot_count) * r * r;
  }
  res.residual_rms = std::sqrt(wss / W);
  if (!(res.gamma > 0.0)) {
    std::ostringstream oss;
    oss << "fit_gamma: fitted gain is not positive (gamma=" << res.gamma
        << ", slope=" << res.slope << ", points=" << res.points_used
        << ", residual_rms=" << res.residual_rms << ")";
    throw calibration_error(oss.str());
  }
  return res;
}

PhotonHistogram rebin(const std::vector<double>& voltages, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("rebin: gamma must be > 0");
  std::vector<long> counts;
  for (double v : voltages) {
    const double b = std::floor(v / gamma + 0.5);
    const long m = b < 0.0 ? 0L : static_cast<long>(b);
    if (static_cast<std::size_t>(m) >= counts.size()) counts.resize(m + 1, 0L);
    ++counts[m];
  }
  PhotonHistogram h;
  h.total_shots = static_cast<long>(voltages.size());
  h.probs.resize(counts.size());
  const double n = static_cast<double>(h.total_shots);
  for (std::size_t m = 0; m < counts.size(); ++m) {
    h.probs[m] = static_cast<double>(counts[m]) / n;
    h.mean += static_cast<double>(m) * h.probs[m];
  }
  return h;
}

PhotonHistogram bernoulli_convolve(const PhotonHistogram& p, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("bernoulli_convolve: eta must lie in [0, 1]");
  }
  PhotonHistogram out;
  out.total_shots = p.total_shots;
  if (eta == 1.0) {
    out = p;
    return out;
  }
  const std::size_t n_max = p.probs.size();
  out.probs.assign(n_max, 0.0);
  if (eta == 0.0) {
    double mass = 0.0;
    for (double pn : p.probs) mass += pn;
    out.probs.assign(1, mass);
    out.mean = 0.0;
    return out;
  }
  const double ratio = eta / (1.0 - eta);
  for (std::size_t n = 0; n < n_max; ++n) {
    const double pn = p.probs[n];
    if (pn == 0.0) continue;
    // binomial pmf over m = 0..n by upward recurrence
    double b = std::pow(1.0 - eta, static_cast<double>(n));
    for (std::size_t m = 0; m <= n; ++m) {
      out.probs[m] += pn * b;
      b *= ratio * static_cast<double>(n - m) / static_cast<double>(m + 1);
    }
  }
  for (std::size_t m = 0; m < out.probs.size(); ++m) {
    out.mean += static_cast<double>(m) * out.probs[m];
  }
  return out;
}

PhotonHistogram poisson_histogram(double mean, double tail) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("poisson_histogram: mean must be >= 0");
  }
  PhotonHistogram h;
  double term = std::exp(-mean);
  double cum = term;
  h.probs.push_back(term);
  std::size_t m = 0;
  while (cum < 1.0 - tail) {
    ++m;
    term *= mean / static_cast<double>(m);
    cum += term;
    h.probs.push_back(term);
  }
  for (std::size_t j = 0; j < h.probs.size(); ++j) {
    h.mean += static_cast<double>(j) * h.probs[j];
  }
  return h;
}

}  // namespace wigrec
