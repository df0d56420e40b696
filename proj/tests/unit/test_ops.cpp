#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "degsynth/analysis.hpp"
#include "degsynth/kernels.hpp"
#include "degsynth/ops.hpp"
#include "degsynth/png_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace degsynth;
using fixtures::max_abs_diff;

namespace {

Kernel random_kernel(int size, RandomSource& rng) {
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (double& v : w) v = rng.uniform(-0.5, 1.0);
  return Kernel({size, GaussianShape{}}, w);
}

std::vector<double> as_vector(const Kernel& k) { return k.weights(); }

// Scalar resamplers written straight from the definitions, one output sample
// at a time, for comparison with the separable implementation.
double src_coord(int dst, int in, int out) { return (dst + 0.5) * in / out - 0.5; }

double bilinear_at(const Image& img, int c, double sy, double sx) {
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  const int y0 = static_cast<int>(std::floor(sy)), x0 = static_cast<int>(std::floor(sx));
  const double fy = sy - y0, fx = sx - x0;
  double acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double wy = a ? fy : 1 - fy, wx = b ? fx : 1 - fx;
      acc += wy * wx * img.at(c, clampi(y0 + a, img.height()), clampi(x0 + b, img.width()));
    }
  return acc;
}

double keys(double t) {
  const double a = -0.75;
  t = std::abs(t);
  if (t <= 1) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
  if (t < 2) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
  return 0.0;
}

double bicubic_at(const Image& img, int c, double sy, double sx) {
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  const int y0 = static_cast<int>(std::floor(sy)), x0 = static_cast<int>(std::floor(sx));
  double acc = 0.0;
  for (int a = -1; a <= 2; ++a)
    for (int b = -1; b <= 2; ++b) {
      acc += keys(sy - (y0 + a)) * keys(sx - (x0 + b)) *
             img.at(c, clampi(y0 + a, img.height()), clampi(x0 + b, img.width()));
    }
  return acc;
}

// Box average of the source footprint [dst*in/out, (dst+1)*in/out) along
// both axes, integrating over the pixel squares.
double area_at(const Image& img, int c, int oy, int ox, int oh, int ow) {
  const double y0 = static_cast<double>(oy) * img.height() / oh;
  const double y1 = static_cast<double>(oy + 1) * img.height() / oh;
  const double x0 = static_cast<double>(ox) * img.width() / ow;
  const double x1 = static_cast<double>(ox + 1) * img.width() / ow;
  double acc = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    const double cy = std::max(0.0, std::min<double>(y + 1, y1) - std::max<double>(y, y0));
    for (int x = 0; x < img.width(); ++x) {
      const double cx = std::max(0.0, std::min<double>(x + 1, x1) - std::max<double>(x, x0));
      acc += cy * cx * img.at(c, y, x);
    }
  }
  return acc / ((y1 - y0) * (x1 - x0));
}

}  // namespace

TEST_SUITE("convolve") {
  TEST_CASE("matches the direct oracle") {
    RandomSource rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const Image img = fixtures::random_image(16, 16, 3, rng);
      const Kernel k = random_kernel(7, rng);
      CHECK(max_abs_diff(convolve(img, k), oracle::convolve(img, as_vector(k), 7)) < 1e-12);
    }
    const Image tall = fixtures::random_image(23, 9, 1, rng);
    const Kernel k9 = random_kernel(9, rng);
    CHECK(max_abs_diff(convolve(tall, k9), oracle::convolve(tall, as_vector(k9), 9)) < 1e-12);
  }

  TEST_CASE("delta kernel is the identity") {
    std::vector<double> w(25, 0.0);
    w[12] = 1.0;
    RandomSource rng(32);
    const Image img = fixtures::random_image(10, 12, 3, rng);
    CHECK(convolve(img, Kernel({5, GaussianShape{}}, w)) == img);
  }

  TEST_CASE("unit-sum kernels keep constants") {
    RandomSource rng(33);
    KernelSamplingConfig cfg;
    const Image flat(24, 24, 3, 0.37);
    for (int i = 0; i < 100; ++i) {
      CHECK(max_abs_diff(convolve(flat, sample_kernel(cfg, rng)), flat) < 1e-12);
    }
  }

  TEST_CASE("linearity") {
    RandomSource rng(34);
    const Image x = fixtures::random_image(12, 12, 1, rng);
    const Image y = fixtures::random_image(12, 12, 1, rng);
    const Kernel k = make_gaussian(1.2, 0.7, 0.4, 7);
    Image mix(12, 12, 1);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.samples()[i] = 2.5 * x.samples()[i] - 0.75 * y.samples()[i];
    const Image lhs = convolve(mix, k);
    const Image cx = convolve(x, k), cy = convolve(y, k);
    for (std::size_t i = 0; i < mix.size(); ++i) {
      CHECK(std::abs(lhs.samples()[i] - (2.5 * cx.samples()[i] - 0.75 * cy.samples()[i])) < 1e-12);
    }
  }

  TEST_CASE("kernel larger than the image is rejected") {
    CHECK_THROWS_AS(convolve(Image(6, 30, 1), make_gaussian(1, 1, 0, 7)), std::invalid_argument);
    CHECK_THROWS_AS(convolve(Image(30, 6, 1), make_gaussian(1, 1, 0, 7)), std::invalid_argument);
  }

  TEST_CASE("gaussian blur equals the dense separable kernel") {
    CHECK(gaussian_blur_taps(8.0) == 51);
    CHECK(gaussian_blur_taps(1.0) == 9);
    RandomSource rng(35);
    const Image img = fixtures::random_image(20, 18, 3, rng);
    for (double sigma : {0.6, 1.0, 2.0}) {
      const int taps = gaussian_blur_taps(sigma);
      const int t = taps / 2;
      std::vector<double> g(taps);
      double s = 0.0;
      for (int i = 0; i < taps; ++i) s += g[i] = std::exp(-0.5 * (i - t) * (i - t) / (sigma * sigma));
      for (double& v : g) v /= s;
      std::vector<double> dense(static_cast<std::size_t>(taps) * taps);
      for (int a = 0; a < taps; ++a)
        for (int b = 0; b < taps; ++b) dense[a * taps + b] = g[a] * g[b];
      CHECK(max_abs_diff(gaussian_blur(img, sigma), oracle::convolve(img, dense, taps)) < 1e-12);
    }
    const Image tiny = fixtures::random_image(5, 4, 1, rng);
    const Image blurred = gaussian_blur(tiny, 8.0);
    CHECK(blurred.same_shape(tiny));
    const Image flat(5, 4, 1, 0.6);
    CHECK(max_abs_diff(gaussian_blur(flat, 8.0), flat) < 1e-12);
  }
}

TEST_SUITE("resize") {
  TEST_CASE("same size bilinear is the identity") {
    RandomSource rng(41);
    const Image img = fixtures::random_image(13, 17, 3, rng);
    CHECK(max_abs_diff(resize(img, 13, 17, ResizeMode::kBilinear), img) < 1e-12);
    CHECK(max_abs_diff(resize(img, 13, 17, ResizeMode::kBicubic), img) < 1e-12);
    CHECK(max_abs_diff(resize(img, 13, 17, ResizeMode::kArea), img) < 1e-12);
  }

  TEST_CASE("area 4x4 to 2x2 gives block means") {
    Image img(4, 4, 1);
    for (int i = 0; i < 16; ++i) img.samples()[i] = i;
    const Image out = resize(img, 2, 2, ResizeMode::kArea);
    CHECK(out.at(0, 0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0).epsilon(1e-15));
    CHECK(out.at(0, 0, 1) == doctest::Approx((2 + 3 + 6 + 7) / 4.0).epsilon(1e-15));
    CHECK(out.at(0, 1, 0) == doctest::Approx((8 + 9 + 12 + 13) / 4.0).epsilon(1e-15));
    CHECK(out.at(0, 1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0).epsilon(1e-15));
  }

  TEST_CASE("modes match scalar oracles") {
    RandomSource rng(42);
    const Image img = fixtures::random_image(19, 23, 1, rng);
    for (auto [oh, ow] : {std::pair{7, 9}, std::pair{31, 40}, std::pair{11, 23}, std::pair{19, 5}}) {
      const Image bl = resize(img, oh, ow, ResizeMode::kBilinear);
      const Image bc = resize(img, oh, ow, ResizeMode::kBicubic);
      for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
          const double sy = src_coord(y, 19, oh), sx = src_coord(x, 23, ow);
          CHECK(std::abs(bl.at(0, y, x) - bilinear_at(img, 0, sy, sx)) < 1e-12);
          CHECK(std::abs(bc.at(0, y, x) - bicubic_at(img, 0, sy, sx)) < 1e-12);
        }
    }
    for (auto [oh, ow] : {std::pair{7, 9}, std::pair{6, 13}}) {
      const Image ar = resize(img, oh, ow, ResizeMode::kArea);
      for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) CHECK(std::abs(ar.at(0, y, x) - area_at(img, 0, y, x, oh, ow)) < 1e-12);
    }
    const Image up_area = resize(img, 40, 50, ResizeMode::kArea);
    CHECK(up_area == resize(img, 40, 50, ResizeMode::kBilinear));
  }

  TEST_CASE("constants stay constant in every mode") {
    const Image flat(15, 9, 3, 0.42);
    for (auto mode : {ResizeMode::kArea, ResizeMode::kBilinear, ResizeMode::kBicubic}) {
      for (auto [oh, ow] : {std::pair{4, 5}, std::pair{33, 20}, std::pair{15, 2}, std::pair{1, 1}}) {
        CHECK(max_abs_diff(resize(flat, oh, ow, mode), Image(oh, ow, 3, 0.42)) < 1e-12);
      }
    }
  }

  TEST_CASE("zero target is rejected") {
    CHECK_THROWS_AS(resize(Image(4, 4, 1), 0, 4, ResizeMode::kBilinear), std::invalid_argument);
    CHECK_THROWS_AS(resize(Image(4, 4, 1), 4, 0, ResizeMode::kArea), std::invalid_argument);
  }

  TEST_CASE("round trips through a quarter size lose detail differently per mode") {
    const Image img = load_png(fixtures::natural_image_path());
    const int h = img.height(), w = img.width();
    const Image cubic = resize(resize(img, h / 4, w / 4, ResizeMode::kBicubic), h, w, ResizeMode::kBicubic);
    const Image mixed = resize(resize(img, h / 4, w / 4, ResizeMode::kArea), h, w, ResizeMode::kBilinear);
    CHECK(psnr(img, cubic) < psnr(img, img));
    CHECK(std::isfinite(psnr(img, cubic)));
    CHECK(psnr(img, cubic) != psnr(img, mixed));
    CHECK(max_abs_diff(cubic, mixed) > 1e-3);
  }

  TEST_CASE("mode names round trip") {
    for (auto mode : {ResizeMode::kArea, ResizeMode::kBilinear, ResizeMode::kBicubic}) {
      CHECK(parse_mode(mode_name(mode)) == mode);
    }
    CHECK_THROWS_AS(parse_mode("nearest"), std::invalid_argument);
  }
}

TEST_SUITE("noise") {
  TEST_CASE("zero strength is the identity") {
    RandomSource rng(51);
    const Image img = fixtures::random_image(8, 8, 3, rng);
    CHECK(add_noise(img, GaussianNoise{0.0, false}, rng) == img);
    CHECK(add_noise(img, GaussianNoise{0.0, true}, rng) == img);
    CHECK(add_noise(img, PoissonNoise{0.0, false, 256}, rng) == img);
    CHECK(add_noise(img, PoissonNoise{0.0, true, 256}, rng) == img);
  }

  TEST_CASE("gaussian noise statistics") {
    RandomSource rng(52);
    const double sigma = 0.05;
    const Image flat(1000, 1000, 1, 0.5);
    const Image out = add_noise(flat, GaussianNoise{sigma, false}, rng);
    const double n = static_cast<double>(out.size());
    double sum = 0.0, sq = 0.0;
    for (double v : out.samples()) {
      sum += v - 0.5;
      sq += (v - 0.5) * (v - 0.5);
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(n));
    CHECK(std::abs(std::sqrt(sq / n - mean * mean) / sigma - 1.0) < 0.01);
  }

  TEST_CASE("gray noise adds one shared sample per pixel") {
    RandomSource source(53);
    const Image img = fixtures::random_image(16, 16, 3, source);

    RandomSource rng(7), replay(7);
    const double sigma = 0.1;
    const Image out = add_noise(img, GaussianNoise{sigma, true}, rng);
    for (std::size_t i = 0; i < img.plane_size(); ++i) {
      const double n = sigma * replay.normal();
      for (int c = 0; c < 3; ++c) CHECK(out.plane(c)[i] == img.plane(c)[i] + n);
    }

    RandomSource prng(8), preplay(8);
    const Image pout = add_noise(img, PoissonNoise{1.5, true, 256}, prng);
    for (std::size_t i = 0; i < img.plane_size(); ++i) {
      const double luma = 0.299 * img.plane(0)[i] + 0.587 * img.plane(1)[i] + 0.114 * img.plane(2)[i];
      const double p = std::clamp(luma, 0.0, 1.0);
      const double n = (static_cast<double>(preplay.poisson(p * 256)) / 256 - p) * 1.5;
      for (int c = 0; c < 3; ++c) CHECK(pout.plane(c)[i] == img.plane(c)[i] + n);
    }
  }

  TEST_CASE("poisson variance grows linearly with intensity") {
    const double photons = 256.0;
    std::vector<double> ps = {0.25, 0.5, 1.0}, vars;
    RandomSource rng(54);
    for (double p : ps) {
      const Image out = add_noise(Image(1000, 1000, 1, p), PoissonNoise{1.0, false, photons}, rng);
      double sum = 0.0, sq = 0.0;
      for (double v : out.samples()) {
        sum += v - p;
        sq += (v - p) * (v - p);
      }
      const double n = static_cast<double>(out.size());
      const double var = sq / n - (sum / n) * (sum / n);
      CHECK(std::abs(var / (p / photons) - 1.0) < 0.05);
      vars.push_back(var);
    }
    // Least-squares slope of variance on intensity.
    double mx = 0, my = 0;
    for (int i = 0; i < 3; ++i) mx += ps[i] / 3, my += vars[i] / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) sxy += (ps[i] - mx) * (vars[i] - my), sxx += (ps[i] - mx) * (ps[i] - mx);
    CHECK(std::abs((sxy / sxx) / (1.0 / photons) - 1.0) < 0.05);
  }

  TEST_CASE("noise is reproducible from the seed") {
    RandomSource src(55);
    const Image img = fixtures::random_image(9, 9, 3, src);
    for (NoiseSpec spec : {NoiseSpec{GaussianNoise{0.1, false}}, NoiseSpec{PoissonNoise{2.0, false, 256}}}) {
      RandomSource a(99), b(99);
      CHECK(add_noise(img, spec, a) == add_noise(img, spec, b));
    }
  }
}

TEST_SUITE("usm") {
  TEST_CASE("constant image and zero weight are unchanged") {
    const Image flat(40, 40, 3, 0.3);
    CHECK(max_abs_diff(usm_sharpen(flat, {}), flat) < 1e-12);
    RandomSource rng(61);
    const Image img = fixtures::random_image(30, 30, 3, rng);
    CHECK(usm_sharpen(img, {8.0, 0.0, 10.0 / 255.0}) == img);
  }

  TEST_CASE("step edge overshoots before clamping") {
    Image step(32, 32, 1);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) step.at(0, y, x) = x < 16 ? 0.2 : 0.8;
    const Image out = usm_sharpen_unclamped(step, {});
    const auto [mn, mx] = std::minmax_element(out.samples().begin(), out.samples().end());
    CHECK(*mx > 0.8);
    CHECK(*mn < 0.2);
  }

  TEST_CASE("commutes with channel permutation") {
    RandomSource rng(62);
    const Image img = fixtures::random_image(24, 20, 3, rng);
    Image perm(24, 20, 3);
    const int order[3] = {2, 0, 1};
    for (int c = 0; c < 3; ++c)
      std::copy(img.plane(order[c]).begin(), img.plane(order[c]).end(), perm.plane(c).begin());
    const Image a = usm_sharpen(img, {});
    const Image b = usm_sharpen(perm, {});
    for (int c = 0; c < 3; ++c) {
      CHECK(std::equal(a.plane(order[c]).begin(), a.plane(order[c]).end(), b.plane(c).begin()));
    }
  }

  TEST_CASE("smooth regions far from edges are untouched") {
    Image img(80, 80, 1, 0.4);
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 10; ++x) img.at(0, y, x) = 0.9;
    const UsmParams params;
    const Image out = usm_sharpen(img, params);
    const int reach = gaussian_blur_taps(params.sigma) / 2;
    const Image residual_src = gaussian_blur(img, params.sigma);
    // Pixels whose Chebyshev distance to every above-threshold pixel exceeds the
    // blur reach receive no mask weight at all.
    std::vector<std::pair<int, int>> active;
    for (int y = 0; y < 80; ++y)
      for (int x = 0; x < 80; ++x)
        if (std::abs(img.at(0, y, x) - residual_src.at(0, y, x)) > params.threshold) active.push_back({y, x});
    REQUIRE(!active.empty());
    int untouched = 0;
    for (int y = 0; y < 80; ++y)
      for (int x = 0; x < 80; ++x) {
        bool far = true;
        for (auto [ay, ax] : active) far &= std::max(std::abs(ay - y), std::abs(ax - x)) > reach;
        if (far) {
          CHECK(out.at(0, y, x) == img.at(0, y, x));
          ++untouched;
        }
      }
    CHECK(untouched > 0);
  }
}
