#include <cmath>
#include <stdexcept>

#include "degsynth/ops.hpp"

namespace degsynth {

Image usm_sharpen_unclamped(const Image& img, const UsmParams& params) {
  if (!(params.weight >= 0.0)) throw std::invalid_argument("usm weight must be >= 0");
  if (!(params.threshold >= 0.0 && params.threshold <= 1.0)) {
    throw std::invalid_argument("usm threshold must lie in [0,1]");
  }
  if (!(params.sigma > 0.0)) throw std::invalid_argument("usm sigma must be > 0");

  const Image blurred = gaussian_blur(img, params.sigma);
  const std::size_t n = img.plane_size();

  Image mask(img.height(), img.width(), 1);
  auto mask_plane = mask.plane(0);
  for (std::size_t i = 0; i < n; ++i) {
    double largest = 0.0;
    for (int c = 0; c < img.channels(); ++c) {
      largest = std::max(largest, std::fabs(img.plane(c)[i] - blurred.plane(c)[i]));
    }
    mask_plane[i] = largest > params.threshold ? 1.0 : 0.0;
  }
  const Image soft = gaussian_blur(mask, params.sigma);

  Image out = img;
  for (int c = 0; c < img.channels(); ++c) {
    auto dst = out.plane(c);
    const auto base = blurred.plane(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double residual = dst[i] - base[i];
      dst[i] += params.weight * soft.plane(0)[i] * residual;
    }
  }
  return out;
}

Image usm_sharpen(const Image& img, const UsmParams& params) {
  return clamp_finalize(usm_sharpen_unclamped(img, params));
}

}  // namespace degsynth
