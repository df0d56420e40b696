#include <algorithm>
#include <stdexcept>
#include <vector>

#include "degsynth/ops.hpp"

namespace degsynth {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double poisson_residual(double value, double photons, RandomSource& rng) {
  const double p = std::clamp(value, 0.0, 1.0);
  const auto count = static_cast<double>(rng.poisson(p * photons));
  return count / photons - p;
}

Image add_gaussian(const Image& img, const GaussianNoise& spec, RandomSource& rng) {
  if (!(spec.sigma >= 0.0)) throw std::invalid_argument("gaussian noise sigma must be >= 0");
  Image out = img;
  if (spec.gray) {
    std::vector<double> plane(img.plane_size());
    for (double& n : plane) n = spec.sigma * rng.normal();
    for (int c = 0; c < out.channels(); ++c) {
      auto dst = out.plane(c);
      for (std::size_t i = 0; i < plane.size(); ++i) dst[i] += plane[i];
    }
  } else {
    for (double& v : out.samples()) v += spec.sigma * rng.normal();
  }
  return out;
}

Image add_poisson(const Image& img, const PoissonNoise& spec, RandomSource& rng) {
  if (!(spec.scale >= 0.0)) throw std::invalid_argument("poisson noise scale must be >= 0");
  if (!(spec.photons > 0.0)) throw std::invalid_argument("poisson photon count must be > 0");
  Image out = img;
  if (spec.gray) {
    std::vector<double> plane(img.plane_size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
      const double luma = img.channels() == 3 ? kLumaR * img.plane(0)[i] +
                                                    kLumaG * img.plane(1)[i] +
                                                    kLumaB * img.plane(2)[i]
                                              : img.plane(0)[i];
      plane[i] = poisson_residual(luma, spec.photons, rng) * spec.scale;
    }
    for (int c = 0; c < out.channels(); ++c) {
      auto dst = out.plane(c);
      for (std::size_t i = 0; i < plane.size(); ++i) dst[i] += plane[i];
    }
  } else {
    for (double& v : out.samples()) v += poisson_residual(v, spec.photons, rng) * spec.scale;
  }
  return out;
}

}  // namespace

Image add_noise(const Image& img, const NoiseSpec& spec, RandomSource& rng) {
  return std::visit(Overloaded{
                        [&](const GaussianNoise& g) { return add_gaussian(img, g, rng); },
                        [&](const PoissonNoise& p) { return add_poisson(img, p, rng); },
                    },
                    spec);
}

}  // namespace degsynth
