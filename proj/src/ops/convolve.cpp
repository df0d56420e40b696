#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "degsynth/ops.hpp"

namespace degsynth {

namespace {

// Mirror index into [0, n) without repeating the edge sample; folds
// repeatedly so any offset is valid.
int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Copy of one plane with `pad` mirrored samples on every side.
std::vector<double> pad_plane(std::span<const double> plane, int height, int width, int pad) {
  const int pw = width + 2 * pad;
  std::vector<double> padded(static_cast<std::size_t>(height + 2 * pad) * pw);
  std::vector<int> cols(pw);
  for (int x = 0; x < pw; ++x) cols[x] = reflect101(x - pad, width);
  for (int y = 0; y < height + 2 * pad; ++y) {
    const double* src = plane.data() + static_cast<std::size_t>(reflect101(y - pad, height)) * width;
    double* dst = padded.data() + static_cast<std::size_t>(y) * pw;
    for (int x = 0; x < pw; ++x) dst[x] = src[cols[x]];
  }
  return padded;
}

// One-dimensional filter along rows (horizontal) or columns, with mirrored
// borders. `taps` is symmetric, so correlation and convolution coincide.
void filter_axis(std::span<const double> src, std::span<double> dst, int height, int width,
                 const std::vector<double>& taps, bool horizontal) {
  const int radius = static_cast<int>(taps.size()) / 2;
  const int n = horizontal ? width : height;
  std::vector<int> index(static_cast<std::size_t>(n) * taps.size());
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
      index[static_cast<std::size_t>(i) * taps.size() + t] = reflect101(i + t - radius, n);
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int i = horizontal ? x : y;
      const int* idx = index.data() + static_cast<std::size_t>(i) * taps.size();
      double acc = 0.0;
      for (std::size_t t = 0; t < taps.size(); ++t) {
        const std::size_t at = horizontal ? static_cast<std::size_t>(y) * width + idx[t]
                                          : static_cast<std::size_t>(idx[t]) * width + x;
        acc += taps[t] * src[at];
      }
      dst[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
}

}  // namespace

Image convolve(const Image& img, const Kernel& kernel) {
  const int size = kernel.size();
  if (size > img.height() || size > img.width()) {
    throw std::invalid_argument("convolve: " + std::to_string(size) + "x" + std::to_string(size) +
                                " kernel is larger than " + std::to_string(img.height()) + "x" +
                                std::to_string(img.width()) + " image");
  }
  const int r = kernel.radius();
  const int h = img.height(), w = img.width();
  const int pw = w + 2 * r;

  // out(y,x) = sum k(dy,dx) in(y-dy, x-dx) = sum flipped[a][b] padded(y+a, x+b)
  std::vector<double> flipped(kernel.weights().rbegin(), kernel.weights().rend());

  Image out(h, w, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const std::vector<double> padded = pad_plane(img.plane(c), h, w, r);
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      double* row_out = dst.data() + static_cast<std::size_t>(y) * w;
      for (int a = 0; a < size; ++a) {
        const double* row_in = padded.data() + static_cast<std::size_t>(y + a) * pw;
        for (int b = 0; b < size; ++b) {
          const double weight = flipped[static_cast<std::size_t>(a) * size + b];
          const double* in = row_in + b;
          for (int x = 0; x < w; ++x) row_out[x] += weight * in[x];
        }
      }
    }
  }
  return out;
}

int gaussian_blur_taps(double sigma) {
  return 2 * (static_cast<int>(std::floor(3.0 * sigma)) + 1) + 1;
}

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) return img;
  const int taps = gaussian_blur_taps(sigma);
  const int radius = taps / 2;
  std::vector<double> weights(taps);
  double sum = 0.0;
  for (int t = 0; t < taps; ++t) {
    const double d = t - radius;
    weights[t] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += weights[t];
  }
  for (double& wt : weights) wt /= sum;

  Image out(img.height(), img.width(), img.channels());
  std::vector<double> tmp(img.plane_size());
  for (int c = 0; c < img.channels(); ++c) {
    filter_axis(img.plane(c), tmp, img.height(), img.width(), weights, true);
    filter_axis(tmp, out.plane(c), img.height(), img.width(), weights, false);
  }
  return out;
}

}  // namespace degsynth
