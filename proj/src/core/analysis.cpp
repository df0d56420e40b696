#include "degsynth/analysis.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace degsynth {

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: shape mismatch");
  const auto sa = a.samples();
  const auto sb = b.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  if (sum == 0.0) return kPsnrIdentical;
  const double mse = sum / static_cast<double>(sa.size());
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

int signed_frequency(int k, int n) { return k <= n / 2 ? k : k - n; }

// Forward DFT of `count` sequences of length n with stride `step` between
// elements and `pitch` between sequences, in place.
void dft_lines(std::vector<std::complex<double>>& data, int n, int count, std::size_t step,
               std::size_t pitch) {
  std::vector<std::complex<double>> twiddle(n);
  for (int k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / n;
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::complex<double>> line(n), out(n);
  for (int s = 0; s < count; ++s) {
    const std::size_t base = s * pitch;
    for (int i = 0; i < n; ++i) line[i] = data[base + i * step];
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < n; ++i) acc += line[i] * twiddle[(static_cast<long>(k) * i) % n];
      out[k] = acc;
    }
    for (int k = 0; k < n; ++k) data[base + k * step] = out[k];
  }
}

}  // namespace

double PowerSpectrum::radial_frequency(int v, int u) const {
  const double fu = static_cast<double>(signed_frequency(u, width)) / width;
  const double fv = static_cast<double>(signed_frequency(v, height)) / height;
  return 2.0 * std::numbers::pi * std::sqrt(fu * fu + fv * fv);
}

PowerSpectrum power_spectrum(const Image& img) {
  if (img.channels() != 1) {
    throw std::invalid_argument("power_spectrum: expected a single-channel image, got " +
                                std::to_string(img.channels()) + " channels");
  }
  const int h = img.height(), w = img.width();
  std::vector<std::complex<double>> grid(img.samples().begin(), img.samples().end());
  dft_lines(grid, w, h, 1, w);  // rows
  dft_lines(grid, h, w, w, 1);  // columns

  PowerSpectrum spectrum{h, w, std::vector<double>(grid.size())};
  const double norm = 1.0 / (static_cast<double>(h) * w);
  for (std::size_t i = 0; i < grid.size(); ++i) spectrum.power[i] = std::norm(grid[i]) * norm;
  return spectrum;
}

double RadialSpectrum::total_power() const {
  double total = beyond_nyquist.total_power;
  for (const auto& bin : bins) total += bin.total_power;
  return total;
}

RadialSpectrum radial_power_spectrum(const PowerSpectrum& spectrum, int bins) {
  if (bins < 1) throw std::invalid_argument("radial_power_spectrum: bins must be >= 1");
  RadialSpectrum result;
  result.bins.resize(bins);
  const double width = std::numbers::pi / bins;
  for (int b = 0; b < bins; ++b) {
    result.bins[b].omega_lo = b * width;
    result.bins[b].omega_hi = (b + 1) * width;
  }
  result.beyond_nyquist.omega_lo = std::numbers::pi;
  result.beyond_nyquist.omega_hi = std::numbers::pi * std::numbers::sqrt2;

  for (int v = 0; v < spectrum.height; ++v) {
    for (int u = 0; u < spectrum.width; ++u) {
      const double omega = spectrum.radial_frequency(v, u);
      RadialBin* bin = &result.beyond_nyquist;
      // Exactly pi (the Nyquist axis) belongs to the last bin.
      if (omega <= std::numbers::pi + 1e-12) {
        bin = &result.bins[std::min(bins - 1, static_cast<int>(omega / width))];
      }
      bin->total_power += spectrum.at(v, u);
      ++bin->count;
    }
  }
  for (auto& bin : result.bins) {
    if (bin.count > 0) bin.mean_power = bin.total_power / bin.count;
  }
  auto& rest = result.beyond_nyquist;
  if (rest.count > 0) rest.mean_power = rest.total_power / rest.count;
  return result;
}

RadialSpectrum radial_power_spectrum(const Image& img, int bins) {
  return radial_power_spectrum(power_spectrum(img), bins);
}

Tensor3 pixel_unshuffle(const Image& img, int scale) {
  if (scale < 1) throw std::invalid_argument("pixel_unshuffle: scale must be >= 1");
  if (img.height() % scale != 0 || img.width() % scale != 0) {
    throw std::invalid_argument("pixel_unshuffle: " + std::to_string(img.height()) + "x" +
                                std::to_string(img.width()) + " is not divisible by " +
                                std::to_string(scale));
  }
  Tensor3 out;
  out.channels = img.channels() * scale * scale;
  out.height = img.height() / scale;
  out.width = img.width() / scale;
  out.data.resize(img.size());
  std::size_t k = 0;
  for (int c = 0; c < img.channels(); ++c) {
    for (int dy = 0; dy < scale; ++dy) {
      for (int dx = 0; dx < scale; ++dx) {
        for (int i = 0; i < out.height; ++i) {
          for (int j = 0; j < out.width; ++j) {
            out.data[k++] = img.at(c, i * scale + dy, j * scale + dx);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace degsynth
