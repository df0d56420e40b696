#pragma once

#include <string_view>
#include <variant>

#include "degsynth/image.hpp"
#include "degsynth/kernels.hpp"
#include "degsynth/random.hpp"

namespace degsynth {

/// Same-size 2-D filtering of each channel. Borders are mirrored without
/// repeating the edge sample (... 2 1 | 0 1 2 ...). Throws if the kernel is
/// larger than the image in either dimension.
Image convolve(const Image& img, const Kernel& kernel);

/// Isotropic Gaussian blur with sigma in pixels, applied separably over
/// 2*(floor(3*sigma) + 1) + 1 taps with the same mirrored borders as
/// convolve(). Unlike convolve() it accepts images smaller than the kernel.
Image gaussian_blur(const Image& img, double sigma);

/// Number of taps gaussian_blur() uses for a given sigma.
int gaussian_blur_taps(double sigma);

enum class ResizeMode { kArea, kBilinear, kBicubic };

std::string_view mode_name(ResizeMode mode);
ResizeMode parse_mode(std::string_view name);

/// Half-pixel-center resampling: src = (dst + 0.5) * in / out - 0.5.
/// Bilinear and bicubic (Keys, a = -0.75) clamp taps at the edge. Area
/// averages the exact source footprint along axes that shrink and falls back
/// to bilinear along axes that grow.
Image resize(const Image& img, int target_height, int target_width, ResizeMode mode);

struct GaussianNoise {
  double sigma = 0.0;  // in [0,1] sample units
  bool gray = false;
  friend bool operator==(const GaussianNoise&, const GaussianNoise&) = default;
};

struct PoissonNoise {
  double scale = 0.0;
  bool gray = false;
  double photons = 256.0;  // lambda: photon count at full intensity
  friend bool operator==(const PoissonNoise&, const PoissonNoise&) = default;
};

using NoiseSpec = std::variant<GaussianNoise, PoissonNoise>;

/// Gaussian: i.i.d. N(0, sigma^2) per sample; gray shares one plane across
/// channels (drawn first-to-last in raster order, one plane per channel
/// otherwise).
/// Poisson: per sample p = clamp(v, 0, 1), noise = (Poisson(p * photons) /
/// photons - p) * scale; gray derives one plane from BT.601 luminance.
Image add_noise(const Image& img, const NoiseSpec& spec, RandomSource& rng);

struct UsmParams {
  double sigma = 8.0;  // 51 taps
  double weight = 0.5;
  double threshold = 10.0 / 255.0;
  friend bool operator==(const UsmParams&, const UsmParams&) = default;
};

/// Unsharp masking. residual = img - blur(img); a binary mask marks pixels
/// whose largest per-channel |residual| exceeds the threshold; the mask is
/// softened with the same blur, and out = clamp(img + weight * mask * residual).
Image usm_sharpen(const Image& img, const UsmParams& params);

/// usm_sharpen before the final clamp.
Image usm_sharpen_unclamped(const Image& img, const UsmParams& params);

}  // namespace degsynth
