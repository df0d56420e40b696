#include "degsynth/jpeg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "degsynth/ops.hpp"

namespace degsynth {

namespace {

// ITU-T T.81 Annex K, tables K.1 and K.2.
constexpr QuantTable kBaseLuma = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

constexpr QuantTable kBaseChroma = {
    17, 18, 24, 47, 99, 99, 99, 99,  //
    18, 21, 26, 66, 99, 99, 99, 99,  //
    24, 26, 56, 99, 99, 99, 99, 99,  //
    47, 66, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,
};

struct DctBasis {
  std::array<double, 64> m{};  // m[u*8 + x] = alpha(u) cos((2x+1) u pi / 16)
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) {
        m[u * 8 + x] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

// out = A * in * B^T where A, B are either the basis or its transpose.
Block8 separable(const Block8& in, bool inverse) {
  const auto& m = basis().m;
  auto coef = [&](int r, int c) { return inverse ? m[c * 8 + r] : m[r * 8 + c]; };
  Block8 tmp{}, out{};
  for (int r = 0; r < 8; ++r) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += coef(r, k) * in[k * 8 + x];
      tmp[r * 8 + x] = acc;
    }
  }
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += tmp[r * 8 + k] * coef(c, k);
      out[r * 8 + c] = acc;
    }
  }
  return out;
}

struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> v;
  double& at(int y, int x) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

struct YCbCr420 {
  Plane y, cb, cr;
};

int round_up16(int n) { return (n + 15) / 16 * 16; }

// Pads, converts to YCbCr in 0..255 units and subsamples chroma.
YCbCr420 to_ycbcr420(const Image& img) {
  if (img.channels() != 3) {
    throw std::invalid_argument("jpeg: expected a 3-channel image, got " +
                                std::to_string(img.channels()));
  }
  const int h = img.height(), w = img.width();
  const int ph = round_up16(h), pw = round_up16(w);
  YCbCr420 out;
  out.y = {ph, pw, std::vector<double>(static_cast<std::size_t>(ph) * pw)};
  Plane cb{ph, pw, out.y.v}, cr{ph, pw, out.y.v};
  for (int y = 0; y < ph; ++y) {
    const int sy = std::min(y, h - 1);
    for (int x = 0; x < pw; ++x) {
      const int sx = std::min(x, w - 1);
      const double r = 255.0 * std::clamp(img.at(0, sy, sx), 0.0, 1.0);
      const double g = 255.0 * std::clamp(img.at(1, sy, sx), 0.0, 1.0);
      const double b = 255.0 * std::clamp(img.at(2, sy, sx), 0.0, 1.0);
      out.y.at(y, x) = 0.299 * r + 0.587 * g + 0.114 * b;
      cb.at(y, x) = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
      cr.at(y, x) = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
    }
  }
  auto subsample = [](const Plane& full) {
    Plane half{full.height / 2, full.width / 2,
               std::vector<double>(static_cast<std::size_t>(full.height / 2) * (full.width / 2))};
    for (int y = 0; y < half.height; ++y) {
      for (int x = 0; x < half.width; ++x) {
        half.at(y, x) = 0.25 * (full.at(2 * y, 2 * x) + full.at(2 * y, 2 * x + 1) +
                                full.at(2 * y + 1, 2 * x) + full.at(2 * y + 1, 2 * x + 1));
      }
    }
    return half;
  };
  out.cb = subsample(cb);
  out.cr = subsample(cr);
  return out;
}

// Quantizes every block of a level-shifted plane. When `reconstruct` is set
// the plane is overwritten with the dequantized inverse transform.
void process_blocks(Plane& plane, const QuantTable& table, std::vector<std::array<int, 64>>* out,
                    bool reconstruct) {
  for (int by = 0; by < plane.height; by += 8) {
    for (int bx = 0; bx < plane.width; bx += 8) {
      Block8 block;
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) block[y * 8 + x] = plane.at(by + y, bx + x) - 128.0;
      }
      const Block8 coeffs = dct8(block);
      std::array<int, 64> quantized;
      Block8 dequantized;
      for (int i = 0; i < 64; ++i) {
        quantized[i] = quantize_coefficient(coeffs[i], table[i]);
        dequantized[i] = static_cast<double>(quantized[i]) * table[i];
      }
      if (out) out->push_back(quantized);
      if (reconstruct) {
        const Block8 pixels = idct8(dequantized);
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) plane.at(by + y, bx + x) = pixels[y * 8 + x] + 128.0;
        }
      }
    }
  }
}

Plane upsample(const Plane& half, int height, int width) {
  const Image src(half.height, half.width, 1, half.v);
  const Image up = resize(src, height, width, ResizeMode::kBilinear);
  return {height, width, std::vector<double>(up.samples().begin(), up.samples().end())};
}

}  // namespace

Block8 dct8(const Block8& block) { return separable(block, false); }

Block8 idct8(const Block8& coeffs) { return separable(coeffs, true); }

QuantTables quant_tables(double quality) {
  if (!(quality >= 1.0 && quality <= 100.0)) {
    throw std::invalid_argument("jpeg quality must lie in [1, 100], got " +
                                std::to_string(quality));
  }
  const double scale = quality < 50.0 ? 5000.0 / quality : 200.0 - 2.0 * quality;
  auto scaled = [scale](int base) {
    const double entry = std::floor((base * scale + 50.0) / 100.0);
    return static_cast<int>(std::clamp(entry, 1.0, 255.0));
  };
  QuantTables tables;
  tables.quality = quality;
  for (int i = 0; i < 64; ++i) {
    tables.luma[i] = scaled(kBaseLuma[i]);
    tables.chroma[i] = scaled(kBaseChroma[i]);
  }
  return tables;
}

int quantize_coefficient(double coeff, int step) {
  return static_cast<int>(std::round(coeff / step));
}

Image jpeg_roundtrip(const Image& img, double quality) {
  const QuantTables tables = quant_tables(quality);
  YCbCr420 planes = to_ycbcr420(img);
  process_blocks(planes.y, tables.luma, nullptr, true);
  process_blocks(planes.cb, tables.chroma, nullptr, true);
  process_blocks(planes.cr, tables.chroma, nullptr, true);

  const int ph = planes.y.height, pw = planes.y.width;
  const Plane cb = upsample(planes.cb, ph, pw);
  const Plane cr = upsample(planes.cr, ph, pw);

  Image out(img.height(), img.width(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double luma = planes.y.at(y, x);
      const double db = cb.at(y, x) - 128.0;
      const double dr = cr.at(y, x) - 128.0;
      out.at(0, y, x) = (luma + 1.402 * dr) / 255.0;
      out.at(1, y, x) = (luma - 0.344136 * db - 0.714136 * dr) / 255.0;
      out.at(2, y, x) = (luma + 1.772 * db) / 255.0;
    }
  }
  return clamp_finalize(std::move(out));
}

JpegCoefficients jpeg_quantized_coefficients(const Image& img, double quality) {
  const QuantTables tables = quant_tables(quality);
  YCbCr420 planes = to_ycbcr420(img);
  JpegCoefficients result;
  process_blocks(planes.y, tables.luma, &result.planes[0], false);
  process_blocks(planes.cb, tables.chroma, &result.planes[1], false);
  process_blocks(planes.cr, tables.chroma, &result.planes[2], false);
  return result;
}

}  // namespace degsynth
