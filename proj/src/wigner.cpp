#include "wigrec/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "wigrec/parallel.hpp"

namespace wigrec {

namespace {

constexpr double kTwoOverPi = 0.6366197723675814;

double gaussian_tail(double dist, double sd) {
  // Mass of a unit 1D Gaussian beyond `dist` from its center.
  return 0.5 * std::erfc(dist / (sd * std::sqrt(2.0)));
}

void check_grid_layout(const WignerGrid& grid, const SquareGrid& geom) {
  if (grid.samples.size() != geom.count()) {
    std::ostringstream msg;
    msg << "grid has " << grid.samples.size() << " samples, geometry expects "
        << geom.count();
    throw std::invalid_argument(msg.str());
  }
  const std::size_t side = geom.side();
  const double tol = 1e-9 * std::max(1.0, geom.half_count * geom.step);
  for (std::size_t iy = 0; iy < side; iy += side > 1 ? side - 1 : 1) {
    for (std::size_t ix = 0; ix < side; ix += side > 1 ? side - 1 : 1) {
      const auto& b = grid.samples[iy * side + ix].beta;
      if (std::abs(b.re - geom.coord(static_cast<int>(ix))) > tol ||
          std::abs(b.im - geom.coord(static_cast<int>(iy))) > tol) {
        throw std::invalid_argument(
            "grid samples are not row-major on the given geometry");
      }
    }
  }
}

double bilinear(const WignerGrid& grid, const SquareGrid& geom, double x,
                double y) {
  const std::size_t side = geom.side();
  if (side == 1) return grid.samples[0].value;
  const double side_max = static_cast<double>(side - 1);
  const double fx = std::clamp(x / geom.step + geom.half_count, 0.0, side_max);
  const double fy = std::clamp(y / geom.step + geom.half_count, 0.0, side_max);
  const std::size_t ix = std::min<std::size_t>(
      static_cast<std::size_t>(fx), side - 2);
  const std::size_t iy = std::min<std::size_t>(
      static_cast<std::size_t>(fy), side - 2);
  const double tx = fx - static_cast<double>(ix);
  const double ty = fy - static_cast<double>(iy);
  const auto at = [&](std::size_t jy, std::size_t jx) {
    return grid.samples[jy * side + jx].value;
  };
  return (1.0 - ty) * ((1.0 - tx) * at(iy, ix) + tx * at(iy, ix + 1)) +
         ty * ((1.0 - tx) * at(iy + 1, ix) + tx * at(iy + 1, ix + 1));
}

double golden_min(const std::function<double(double)>& f, double lo,
                  double hi) {
  // Golden-section search; f unimodal on [lo, hi].
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SquareGrid make_grid(double half_width, double step) {
  if (!(step > 0.0) || !(half_width >= 0.0)) {
    throw std::domain_error("grid needs step > 0 and half_width >= 0");
  }
  SquareGrid g;
  g.step = step;
  g.half_count = static_cast<int>(std::ceil(half_width / step - 1e-9));
  return g;
}

WignerSample wigner_from_hist(const PhotonHistogram& hist,
                              ComplexAmplitude beta) {
  hist.validate();
  WignerSample out;
  out.beta = beta;
  double sum = 0.0;
  double mass = 0.0;
  double sign = 1.0;
  for (double p : hist.probs) {
    sum += sign * p;
    mass += p;
    sign = -sign;
  }
  out.value = kTwoOverPi * sum;
  out.truncation_m = hist.m_max();
  out.tail_bound = kTwoOverPi * std::max(0.0, 1.0 - mass);
  return out;
}

double theory_coherent(ComplexAmplitude beta, ComplexAmplitude beta0) {
  return kTwoOverPi * std::exp(-2.0 * (beta - beta0).mod2());
}

double theory_reduced(ComplexAmplitude beta, const TheoryParams& params) {
  if (!(params.xi >= 0.0 && params.xi <= 1.0) || !(params.beta0_mod >= 0.0)) {
    throw std::domain_error("model needs xi in [0, 1] and beta0_mod >= 0");
  }
  const ComplexAmplitude beta0{params.beta0_mod, 0.0};
  const double root = std::sqrt(params.xi);
  const ComplexAmplitude shifted{root * beta.re - beta0.re,
                                 root * beta.im - beta0.im};
  return kTwoOverPi * std::exp(-2.0 * (1.0 - params.xi) * beta.mod2() -
                               2.0 * shifted.mod2());
}

WignerGrid evaluate_on_grid(const SquareGrid& geom,
                            const std::function<double(ComplexAmplitude)>& f,
                            std::string provenance) {
  WignerGrid out;
  out.provenance = std::move(provenance);
  out.samples.resize(geom.count());
  const std::size_t side = geom.side();
  for (std::size_t iy = 0; iy < side; ++iy) {
    for (std::size_t ix = 0; ix < side; ++ix) {
      WignerSample& s = out.samples[iy * side + ix];
      s.beta = {geom.coord(static_cast<int>(ix)),
                geom.coord(static_cast<int>(iy))};
      s.value = f(s.beta);
    }
  }
  return out;
}

WignerGrid loss_convolve(const WignerGrid& input, const SquareGrid& geom,
                         double eta, int workers) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("efficiency must lie in (0, 1]");
  }
  check_grid_layout(input, geom);
  if (eta == 1.0) return input;  // kernel is a point mass at beta = alpha

  const std::size_t side = geom.side();
  const double root = std::sqrt(eta);
  const double sd = std::sqrt((1.0 - eta) / (4.0 * eta));
  const double extent = geom.half_count * geom.step;

  WignerGrid out;
  out.provenance = input.provenance;
  out.samples.resize(geom.count());

  if (sd < 0.75 * geom.step) {
    // Kernel narrower than the grid resolves: sample the input at the
    // rescaled coordinate instead of integrating.
    for (std::size_t iy = 0; iy < side; ++iy) {
      for (std::size_t ix = 0; ix < side; ++ix) {
        WignerSample& s = out.samples[iy * side + ix];
        s.beta = {geom.coord(static_cast<int>(ix)),
                  geom.coord(static_cast<int>(iy))};
        s.value = bilinear(input, geom, s.beta.re / root, s.beta.im / root);
      }
    }
    return out;
  }

  // Largest |input| on the outermost ring bounds what the kernel can pick
  // up beyond the grid edge.
  double ring_max = 0.0;
  for (std::size_t iy = 0; iy < side; ++iy) {
    for (std::size_t ix = 0; ix < side; ++ix) {
      if (iy == 0 || iy + 1 == side || ix == 0 || ix + 1 == side) {
        ring_max = std::max(ring_max,
                            std::abs(input.samples[iy * side + ix].value));
      }
    }
  }

  double worst_bound = 0.0;
  for (std::size_t j = 0; j < side; ++j) {
    const double c = geom.coord(static_cast<int>(j)) / root;
    const double outside =
        gaussian_tail(c + extent, sd) + gaussian_tail(extent - c, sd);
    // Same geometry on both axes; one axis straying doubles the bound.
    worst_bound = std::max(worst_bound, 2.0 * outside * ring_max / eta);
  }
  if (worst_bound > 1e-6) {
    std::ostringstream msg;
    msg << "grid extent " << extent
        << " does not cover the smoothing kernel: edge contribution bound "
        << worst_bound << " exceeds 1e-6";
    throw coverage_error(msg.str());
  }

  // The kernel factorizes per axis, so the quadrature is two 1D passes
  // with the same side x side matrix K[j][i] = exp(-(x_i - x_j/root)^2
  // / (2 sd^2)).
  std::vector<double> kernel(side * side);
  for (std::size_t j = 0; j < side; ++j) {
    const double c = geom.coord(static_cast<int>(j)) / root;
    for (std::size_t i = 0; i < side; ++i) {
      const double d = geom.coord(static_cast<int>(i)) - c;
      kernel[j * side + i] = std::exp(-d * d / (2.0 * sd * sd));
    }
  }

  // tmp[iy][jx] = sum_ix K[jx][ix] in[iy][ix]
  std::vector<double> tmp(side * side, 0.0);
  parallel_for(side, workers, [&](std::size_t iy) {
    for (std::size_t jx = 0; jx < side; ++jx) {
      double acc = 0.0;
      for (std::size_t ix = 0; ix < side; ++ix) {
        acc += kernel[jx * side + ix] * input.samples[iy * side + ix].value;
      }
      tmp[iy * side + jx] = acc;
    }
  });

  const double prefactor =
      2.0 / (M_PI * (1.0 - eta)) * geom.step * geom.step;
  parallel_for(side, workers, [&](std::size_t jy) {
    const double cy = geom.coord(static_cast<int>(jy)) / root;
    const double outside_y =
        gaussian_tail(cy + extent, sd) + gaussian_tail(extent - cy, sd);
    for (std::size_t jx = 0; jx < side; ++jx) {
      double acc = 0.0;
      for (std::size_t iy = 0; iy < side; ++iy) {
        acc += kernel[jy * side + iy] * tmp[iy * side + jx];
      }
      const double cx = geom.coord(static_cast<int>(jx)) / root;
      const double outside_x =
          gaussian_tail(cx + extent, sd) + gaussian_tail(extent - cx, sd);
      WignerSample& s = out.samples[jy * side + jx];
      s.beta = {geom.coord(static_cast<int>(jx)),
                geom.coord(static_cast<int>(jy))};
      s.value = prefactor * acc;
      s.tail_bound = (outside_x + outside_y) * ring_max / eta;
    }
  });
  return out;
}

double mean_error(const WignerGrid& reconstructed,
                  const std::function<double(ComplexAmplitude)>& theory) {
  if (reconstructed.samples.empty()) {
    throw insufficient_data_error("mean error needs a nonempty grid");
  }
  double acc = 0.0;
  for (const auto& s : reconstructed.samples) {
    acc += theory(s.beta) - s.value;
  }
  return acc / static_cast<double>(reconstructed.samples.size());
}

double fit_beta0(const WignerGrid& reconstructed, double xi) {
  if (reconstructed.samples.size() < 3) {
    throw insufficient_data_error("center fit needs at least 3 samples");
  }
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw std::domain_error("overlap must lie in [0, 1]");
  }
  double peak = 0.0;
  for (const auto& s : reconstructed.samples) {
    peak = std::max(peak, std::abs(s.value));
  }
  if (peak == 0.0) {
    throw fit_error("cannot fit a center to an all-zero grid");
  }

  const auto sse = [&](double b0) {
    const TheoryParams params{b0, xi};
    double acc = 0.0;
    for (const auto& s : reconstructed.samples) {
      const double r = s.value - theory_reduced(s.beta, params);
      acc += r * r;
    }
    return acc;
  };

  constexpr double kLo = 0.0, kHi = 10.0, kCoarse = 0.05;
  double best_b = kLo, best_v = sse(kLo);
  for (double b = kCoarse; b <= kHi + 1e-12; b += kCoarse) {
    const double v = sse(b);
    if (v < best_v) {
      best_v = v;
      best_b = b;
    }
  }
  const double lo = std::max(kLo, best_b - kCoarse);
  const double hi = std::min(kHi, best_b + kCoarse);
  return golden_min(sse, lo, hi);
}

}  // namespace wigrec
