#pragma once

#include <array>
#include <vector>

#include "degsynth/image.hpp"

namespace degsynth {

using Block8 = std::array<double, 64>;  // row-major [y][x]
using QuantTable = std::array<int, 64>;

/// Orthonormal 8x8 DCT-II and its inverse.
Block8 dct8(const Block8& block);
Block8 idct8(const Block8& coeffs);

struct QuantTables {
  QuantTable luma{};
  QuantTable chroma{};
  double quality = 0.0;
};

/// Annex-K base tables scaled by the IJG quality rule:
/// S = 5000/q for q < 50, else 200 - 2q; entry = clamp(floor((base*S + 50)/100), 1, 255).
/// Throws std::invalid_argument unless 1 <= q <= 100.
QuantTables quant_tables(double quality);

/// Round half away from zero of coeff / step.
int quantize_coefficient(double coeff, int step);

/// Transform-domain JPEG simulation of a 3-channel image: edge-replicated
/// padding to a multiple of 16, full-range BT.601 YCbCr, 4:2:0 chroma (2x2
/// mean), 8x8 DCT quantization round trip, bilinear chroma upsampling, back to
/// RGB, crop, clamp. The input is clamped to [0,1] first.
Image jpeg_roundtrip(const Image& img, double quality);

/// Quantized coefficients per plane (Y, Cb, Cr), each a list of 8x8 blocks.
struct JpegCoefficients {
  std::array<std::vector<std::array<int, 64>>, 3> planes;
};

JpegCoefficients jpeg_quantized_coefficients(const Image& img, double quality);

}  // namespace degsynth
