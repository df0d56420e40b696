#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "degsynth/random.hpp"

namespace degsynth {

struct GaussianShape {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double theta = 0.0;
  friend bool operator==(const GaussianShape&, const GaussianShape&) = default;
};

/// pdf ~ exp(-0.5 * q^beta), q = C^T Sigma^-1 C.
struct GeneralizedGaussianShape {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double theta = 0.0;
  double beta = 1.0;
  friend bool operator==(const GeneralizedGaussianShape&,
                         const GeneralizedGaussianShape&) = default;
};

/// pdf ~ 1 / (1 + q^beta).
struct PlateauShape {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double theta = 0.0;
  double beta = 1.0;
  friend bool operator==(const PlateauShape&, const PlateauShape&) = default;
};

/// Circularly symmetric low-pass filter with cutoff omega_c in (0, pi].
struct SincShape {
  double omega_c = 1.0;
  friend bool operator==(const SincShape&, const SincShape&) = default;
};

using KernelShape = std::variant<GaussianShape, GeneralizedGaussianShape, PlateauShape, SincShape>;

struct KernelSpec {
  int size = 21;  // odd, >= 3
  KernelShape shape;
  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

enum class KernelFamily { kGaussian, kGeneralizedGaussian, kPlateau, kSinc };

KernelFamily family_of(const KernelSpec& spec);
std::string_view family_name(KernelFamily family);
KernelFamily parse_family(std::string_view name);

/// Dense, unit-sum size x size filter. Offsets run over [-radius, radius];
/// dy indexes rows, dx columns.
class Kernel {
 public:
  Kernel(KernelSpec spec, std::vector<double> weights);

  int size() const { return spec_.size; }
  int radius() const { return spec_.size / 2; }
  const KernelSpec& spec() const { return spec_; }
  const std::vector<double>& weights() const { return weights_; }

  double at(int dy, int dx) const {
    return weights_[static_cast<std::size_t>(dy + radius()) * size() + (dx + radius())];
  }

 private:
  KernelSpec spec_;
  std::vector<double> weights_;
};

Kernel make_gaussian(double sigma1, double sigma2, double theta, int size);
Kernel make_generalized_gaussian(double sigma1, double sigma2, double theta, double beta, int size);
Kernel make_plateau(double sigma1, double sigma2, double theta, double beta, int size);
Kernel make_sinc(double omega_c, int size);

/// Builds the kernel described by a spec, validating it first.
Kernel make_kernel(const KernelSpec& spec);

/// Weight at offset (dy, dx) before normalization.
double unnormalized_weight(const KernelSpec& spec, int dy, int dx);

/// omega_c / (2 pi r) * J1(omega_c r), with the r -> 0 limit omega_c^2 / (4 pi).
double sinc_response(double omega_c, double radius);

/// Bessel function of the first kind, order one. Power series for |x| < 12,
/// Hankel asymptotic expansion beyond.
double bessel_j1(double x);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

/// Cutoff sampling for sinc kernels: `small_size_range` applies to sizes below
/// `small_size_threshold`, `large_size_range` otherwise.
struct SincSamplingConfig {
  std::vector<int> sizes{7, 9, 11, 13, 15, 17, 19, 21};
  Range small_size_range{1.0471975511965976, 3.141592653589793};  // [pi/3, pi]
  Range large_size_range{0.6283185307179586, 3.141592653589793};  // [pi/5, pi]
  int small_size_threshold = 13;
};

struct KernelSamplingConfig {
  /// Gaussian, generalized Gaussian, plateau. Must sum to 1.
  std::array<double, 3> family_probabilities{0.7, 0.15, 0.15};
  double sinc_probability = 0.1;
  double isotropic_probability = 0.5;
  std::vector<int> sizes{7, 9, 11, 13, 15, 17, 19, 21};
  Range sigma_range{0.2, 3.0};
  Range generalized_beta_range{0.5, 4.0};
  Range plateau_beta_range{1.0, 2.0};
  Range theta_range{-3.141592653589793, 3.141592653589793};
  SincSamplingConfig sinc;
};

/// Throws std::invalid_argument on malformed probabilities or ranges.
void validate(const KernelSamplingConfig& cfg);
void validate(const SincSamplingConfig& cfg);

/// Draw order: sinc flag, then either the sinc size and cutoff, or family,
/// size, isotropy flag, sigmas, theta (anisotropic only), beta (generalized
/// and plateau only).
KernelSpec sample_kernel_spec(const KernelSamplingConfig& cfg, RandomSource& rng);
Kernel sample_kernel(const KernelSamplingConfig& cfg, RandomSource& rng);

/// Draws size then cutoff.
KernelSpec sample_sinc_spec(const SincSamplingConfig& cfg, RandomSource& rng);

}  // namespace degsynth
