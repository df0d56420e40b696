#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "degsynth/analysis.hpp"
#include "degsynth/jpeg.hpp"
#include "degsynth/png_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace degsynth;

namespace {

// ITU-T T.81 Annex K, tables K.1 and K.2.
constexpr int kLuma[64] = {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
                           14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
                           18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
                           49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr int kChroma[64] = {17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
                             24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
                             99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
                             99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

int scaled_entry(int base, double q) {
  const double s = q < 50 ? 5000.0 / q : 200.0 - 2.0 * q;
  return std::clamp(static_cast<int>(std::floor((base * s + 50.0) / 100.0)), 1, 255);
}

// Expected output for a constant gray image: chroma is exactly neutral, so
// only the luma DC coefficient carries information.
double constant_gray_roundtrip(double v, double q) {
  const double level = std::clamp(v, 0.0, 1.0) * 255.0 - 128.0;
  const double dc = 8.0 * level;
  const int step = scaled_entry(kLuma[0], q);
  const double ratio = dc / step;
  const double rounded = ratio < 0 ? -std::floor(-ratio + 0.5) : std::floor(ratio + 0.5);
  const double back = rounded * step / 8.0 + 128.0;
  return std::clamp(back / 255.0, 0.0, 1.0);
}

Block8 random_block(RandomSource& rng) {
  Block8 b{};
  for (double& v : b) v = rng.uniform(-128.0, 127.0);
  return b;
}

}  // namespace

TEST_SUITE("jpeg") {
  TEST_CASE("dct8 matches the direct double sum and inverts exactly") {
    RandomSource rng(71);
    for (int trial = 0; trial < 200; ++trial) {
      const Block8 b = random_block(rng);
      const Block8 d = dct8(b);
      const auto ref = oracle::dct8(b);
      const Block8 back = idct8(d);
      for (int i = 0; i < 64; ++i) {
        CHECK(std::abs(d[i] - ref[i]) < 1e-12 * 128);
        CHECK(std::abs(back[i] - b[i]) < 1e-12 * 128);
      }
    }
  }

  TEST_CASE("dct8 identity at unit scale") {
    RandomSource rng(72);
    for (int trial = 0; trial < 100; ++trial) {
      Block8 b{};
      for (double& v : b) v = rng.uniform();
      const Block8 d = dct8(b);
      const auto ref = oracle::dct8(b);
      const Block8 back = idct8(d);
      for (int i = 0; i < 64; ++i) {
        CHECK(std::abs(d[i] - ref[i]) < 1e-12);
        CHECK(std::abs(back[i] - b[i]) < 1e-12);
      }
    }
  }

  TEST_CASE("constant block has only a DC term") {
    Block8 b;
    b.fill(0.3);
    const Block8 d = dct8(b);
    CHECK(d[0] == doctest::Approx(8 * 0.3).epsilon(1e-14));
    for (int i = 1; i < 64; ++i) CHECK(std::abs(d[i]) < 1e-14);
  }

  TEST_CASE("quantization tables follow the quality rule") {
    for (double q : {1.0, 10.0, 30.0, 49.0, 50.0, 62.5, 75.0, 95.0, 100.0}) {
      const QuantTables t = quant_tables(q);
      for (int i = 0; i < 64; ++i) {
        CHECK(t.luma[i] == scaled_entry(kLuma[i], q));
        CHECK(t.chroma[i] == scaled_entry(kChroma[i], q));
        CHECK((t.luma[i] >= 1 && t.luma[i] <= 255));
      }
    }
    const QuantTables best = quant_tables(100);
    CHECK(std::count(best.luma.begin(), best.luma.end(), 1) == 64);
    CHECK_THROWS_AS(quant_tables(0.5), std::invalid_argument);
    CHECK_THROWS_AS(quant_tables(101), std::invalid_argument);
  }

  TEST_CASE("coefficient rounding is half away from zero") {
    CHECK(quantize_coefficient(5.0, 2) == 3);
    CHECK(quantize_coefficient(-5.0, 2) == -3);
    CHECK(quantize_coefficient(4.9, 2) == 2);
    CHECK(quantize_coefficient(-4.9, 2) == -2);
  }

  TEST_CASE("constant gray images survive as constants") {
    for (double q : {30.0, 50.0, 75.0, 95.0, 100.0}) {
      for (double v : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) {
        const Image in(21, 35, 3, v);
        const Image out = jpeg_roundtrip(in, q);
        const auto [mn, mx] = std::minmax_element(out.samples().begin(), out.samples().end());
        CHECK(*mx - *mn <= 1.0 / 255.0);
        const double expected = constant_gray_roundtrip(v, q);
        for (double s : out.samples()) CHECK(std::abs(s - expected) < 1e-9);
        // The DC error is at most half a quantization step spread over 8 samples.
        const double bound = scaled_entry(kLuma[0], q) / 16.0 / 255.0;
        CHECK(std::abs(*mx - v) <= bound + 1e-12);
      }
    }
    const Image hi_q = jpeg_roundtrip(Image(16, 16, 3, 0.4), 100);
    for (double s : hi_q.samples()) CHECK(std::abs(s - 0.4) <= 1.0 / 255.0);
  }

  TEST_CASE("quality ordering on the natural test image") {
    const Image img = load_png(fixtures::natural_image_path());
    const double p100 = psnr(img, jpeg_roundtrip(img, 100));
    CHECK(p100 >= 40.0);
    double previous = p100;
    for (double q : {95.0, 80.0, 65.0, 50.0, 30.0}) {
      const double p = psnr(img, jpeg_roundtrip(img, q));
      CHECK(p < previous);
      previous = p;
    }
  }

  TEST_CASE("output is bounded and keeps its shape") {
    RandomSource rng(73);
    Image img(13, 29, 3);
    for (double& v : img.samples()) v = rng.uniform(-0.3, 1.3);
    const Image out = jpeg_roundtrip(img, 40);
    CHECK(out.same_shape(img));
    for (double v : out.samples()) CHECK((v >= 0.0 && v <= 1.0));
    CHECK_THROWS_AS(jpeg_roundtrip(Image(8, 8, 1), 50), std::invalid_argument);
  }

  TEST_CASE("a second pass costs less than the first") {
    for (const auto& path : fixtures::corpus_paths()) {
      const Image x = to_rgb(load_png(path));
      for (double q : {30.0, 75.0}) {
        const Image once = jpeg_roundtrip(x, q);
        const Image twice = jpeg_roundtrip(once, q);
        CHECK_MESSAGE(psnr(once, twice) >= psnr(x, once), path.filename().string());
      }
    }
  }

  TEST_CASE("energy compaction at q=50") {
    const Image img = load_png(fixtures::natural_image_path());
    const JpegCoefficients coeffs = jpeg_quantized_coefficients(img, 50);
    long low = 0, all = 0;
    for (const auto& plane : coeffs.planes)
      for (const auto& block : plane)
        for (int i = 0; i < 64; ++i)
          if (block[i] != 0) {
            ++all;
            if (i / 8 < 4 && i % 8 < 4) ++low;
          }
    REQUIRE(all > 0);
    // Measured 0.862 on this image; frozen as a regression floor.
    MESSAGE("nonzero fraction in the low 4x4: " << static_cast<double>(low) / all);
    CHECK(static_cast<double>(low) / all > 0.85);
  }

  TEST_CASE("repeated calls agree") {
    const Image img = load_png(fixtures::natural_image_path());
    CHECK(jpeg_roundtrip(img, 55) == jpeg_roundtrip(img, 55));
  }
}
