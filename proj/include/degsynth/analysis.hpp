#pragma once

#include <limits>
#include <vector>

#include "degsynth/image.hpp"

namespace degsynth {

/// Returned by psnr() when the images are identical.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10*log10(1/MSE) over every sample. Throws std::invalid_argument on shape
/// mismatch.
double psnr(const Image& a, const Image& b);

/// |F(u,v)|^2 / (H*W) of the 2-D DFT of a single-channel image, evaluated by
/// direct summation (row transforms then column transforms, no FFT). With this
/// normalization the grid sums to the sum of squared samples.
struct PowerSpectrum {
  int height = 0;
  int width = 0;
  std::vector<double> power;  // row-major [v][u]

  double at(int v, int u) const { return power[static_cast<std::size_t>(v) * width + u]; }
  /// Radial frequency 2*pi*sqrt((u'/W)^2 + (v'/H)^2), with u', v' the
  /// signed (aliased) frequency indices.
  double radial_frequency(int v, int u) const;
};

PowerSpectrum power_spectrum(const Image& img);

struct RadialBin {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  double mean_power = 0.0;
  double total_power = 0.0;
  int count = 0;
};

/// Annular averages of the power spectrum in `bins` equal-width bins over
/// [0, pi]. Corner frequencies with omega > pi (up to pi*sqrt(2)) fall in
/// `beyond_nyquist` so that the bins plus that remainder account for all power.
struct RadialSpectrum {
  std::vector<RadialBin> bins;
  RadialBin beyond_nyquist;

  double total_power() const;
};

RadialSpectrum radial_power_spectrum(const Image& img, int bins);
RadialSpectrum radial_power_spectrum(const PowerSpectrum& spectrum, int bins);

/// Space-to-depth: output channel c*s*s + dy*s + dx at (i,j) holds input
/// channel c at (i*s + dy, j*s + dx). The result is a raw tensor, so it is
/// returned as a vector plus shape rather than an Image (whose channel count
/// is limited to 1 or 3).
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;  // planar, row-major

  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

Tensor3 pixel_unshuffle(const Image& img, int scale);

}  // namespace degsynth
