#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wigrec/calib.hpp"
#include "wigrec/types.hpp"

namespace wigrec {

/// One Wigner-function value at a point of detected phase space.
struct WignerSample {
  ComplexAmplitude beta;
  double value = 0.0;        ///< in [-2/pi - tail_bound, 2/pi + tail_bound]
  std::size_t truncation_m = 0;  ///< largest photon bin entering the sum
  double tail_bound = 0.0;       ///< bound on the neglected contribution
};

/// A set of Wigner samples, reconstructed or produced by a model.
struct WignerGrid {
  std::vector<WignerSample> samples;
  std::string provenance;  ///< "reconstruction" or "theory"
};

/// Parameters of the overlap-reduced coherent model.
struct TheoryParams {
  double beta0_mod = 0.0;
  double xi = 1.0;
};

/// Uniform square grid centered on the origin, (2*half_count+1)^2 points.
struct SquareGrid {
  double step = 0.05;
  int half_count = 0;

  double coord(int i) const { return (i - half_count) * step; }
  std::size_t side() const {
    return 2 * static_cast<std::size_t>(half_count) + 1;
  }
  std::size_t count() const { return side() * side(); }
};

/// Grid reaching at least half_width along each axis.
SquareGrid make_grid(double half_width, double step);

/// Alternating photon-number sum: value = (2/pi) sum_m (-1)^m p_m.
/// tail_bound is (2/pi) times the probability mass missing from the
/// histogram (zero for empirical histograms, which are complete).
WignerSample wigner_from_hist(const PhotonHistogram& hist,
                              ComplexAmplitude beta);

/// Detected-space Wigner function of a coherent state centered at beta0:
/// (2/pi) exp(-2|beta - beta0|^2).
double theory_coherent(ComplexAmplitude beta, ComplexAmplitude beta0);

/// Coherent model reduced by a mode overlap xi:
/// (2/pi) exp(-2(1-xi)|beta|^2) exp(-2|sqrt(xi) beta - beta0|^2),
/// with beta0 real. Equals theory_coherent when xi = 1.
double theory_reduced(ComplexAmplitude beta, const TheoryParams& params);

/// Evaluate a pointwise model on every grid node (row-major).
WignerGrid evaluate_on_grid(const SquareGrid& geom,
                            const std::function<double(ComplexAmplitude)>& f,
                            std::string provenance);

/// Gaussian smoothing that maps an ideal Wigner grid to the one seen at
/// detection efficiency eta. Input samples must lie row-major on geom.
///
///   out(beta) = 2/(pi(1-eta)) integral d^2a exp(-2|beta - sqrt(eta) a|^2
///               / (1-eta)) in(a)
///
/// The kernel has unit mass over beta, so the integral of the output
/// matches the integral of the input. Output nodes reuse the input
/// coordinates. eta = 1 returns the input unchanged; a kernel much
/// narrower than the grid step degenerates to interpolation at
/// beta/sqrt(eta). Throws coverage_error when the kernel mass reaching
/// beyond the grid could contribute more than 1e-6 to any output value.
WignerGrid loss_convolve(const WignerGrid& input, const SquareGrid& geom,
                         double eta, int workers = 1);

/// Signed mean of (theory - reconstruction) over all samples.
double mean_error(const WignerGrid& reconstructed,
                  const std::function<double(ComplexAmplitude)>& theory);

/// Least-squares fit of the model center against a reconstructed grid,
/// with the overlap fixed. Scalar search on [0, 10].
double fit_beta0(const WignerGrid& reconstructed, double xi);

}  // namespace wigrec
