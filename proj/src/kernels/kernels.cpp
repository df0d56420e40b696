#include "degsynth/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace degsynth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_size(int size) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("kernel size must be odd and >= 3, got " + std::to_string(size));
  }
}

void check_axes(double sigma1, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("kernel sigmas must be positive");
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("kernel beta must be positive");
}

void check_cutoff(double omega_c) {
  if (!(omega_c > 0.0) || omega_c > std::numbers::pi) {
    throw std::invalid_argument("sinc cutoff must lie in (0, pi], got " + std::to_string(omega_c));
  }
}

// Inverse covariance of R diag(s1^2, s2^2) R^T, as the symmetric entries
// (xx, xy, yy), so that q = xx*dx^2 + 2*xy*dx*dy + yy*dy^2.
struct InverseCovariance {
  double xx, xy, yy;

  InverseCovariance(double sigma1, double sigma2, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = 1.0 / (sigma1 * sigma1), b = 1.0 / (sigma2 * sigma2);
    xx = a * c * c + b * s * s;
    xy = (a - b) * c * s;
    yy = a * s * s + b * c * c;
  }

  double quadratic(int dy, int dx) const {
    return xx * dx * dx + 2.0 * xy * dx * dy + yy * dy * dy;
  }
};

void validate_spec(const KernelSpec& spec) {
  check_size(spec.size);
  std::visit(Overloaded{
                 [](const GaussianShape& g) { check_axes(g.sigma1, g.sigma2); },
                 [](const GeneralizedGaussianShape& g) {
                   check_axes(g.sigma1, g.sigma2);
                   check_beta(g.beta);
                 },
                 [](const PlateauShape& p) {
                   check_axes(p.sigma1, p.sigma2);
                   check_beta(p.beta);
                 },
                 [](const SincShape& s) { check_cutoff(s.omega_c); },
             },
             spec.shape);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

void check_range(const Range& r, const char* what) {
  if (!(r.lo <= r.hi)) throw std::invalid_argument(std::string(what) + " range is empty");
}

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("kernel size set is empty");
  for (int size : sizes) check_size(size);
}

}  // namespace

KernelFamily family_of(const KernelSpec& spec) {
  return static_cast<KernelFamily>(spec.shape.index());
}

std::string_view family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian:
      return "gaussian";
    case KernelFamily::kGeneralizedGaussian:
      return "generalized_gaussian";
    case KernelFamily::kPlateau:
      return "plateau";
    case KernelFamily::kSinc:
      return "sinc";
  }
  return "unknown";
}

KernelFamily parse_family(std::string_view name) {
  for (auto f : {KernelFamily::kGaussian, KernelFamily::kGeneralizedGaussian,
                 KernelFamily::kPlateau, KernelFamily::kSinc}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

Kernel::Kernel(KernelSpec spec, std::vector<double> weights)
    : spec_(std::move(spec)), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<std::size_t>(spec_.size) * spec_.size) {
    throw std::invalid_argument("kernel weight count does not match its size");
  }
}

double sinc_response(double omega_c, double radius) {
  if (radius == 0.0) return omega_c * omega_c / (4.0 * std::numbers::pi);
  return omega_c / (2.0 * std::numbers::pi * radius) * bessel_j1(omega_c * radius);
}

double unnormalized_weight(const KernelSpec& spec, int dy, int dx) {
  return std::visit(
      Overloaded{
          [&](const GaussianShape& g) {
            return std::exp(-0.5 * InverseCovariance(g.sigma1, g.sigma2, g.theta).quadratic(dy, dx));
          },
          [&](const GeneralizedGaussianShape& g) {
            const double q = InverseCovariance(g.sigma1, g.sigma2, g.theta).quadratic(dy, dx);
            return std::exp(-0.5 * std::pow(q, g.beta));
          },
          [&](const PlateauShape& p) {
            const double q = InverseCovariance(p.sigma1, p.sigma2, p.theta).quadratic(dy, dx);
            return 1.0 / (1.0 + std::pow(q, p.beta));
          },
          [&](const SincShape& s) {
            return sinc_response(s.omega_c, std::sqrt(static_cast<double>(dy * dy + dx * dx)));
          },
      },
      spec.shape);
}

Kernel make_kernel(const KernelSpec& spec) {
  validate_spec(spec);
  const int radius = spec.size / 2;
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(spec.size) * spec.size);

  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) weights.push_back(unnormalized_weight(spec, dy, dx));
  }

  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(std::fabs(sum) > 0.0)) throw std::domain_error("kernel has zero total weight");
  for (double& w : weights) w /= sum;
  return Kernel(spec, std::move(weights));
}

Kernel make_gaussian(double sigma1, double sigma2, double theta, int size) {
  return make_kernel({size, GaussianShape{sigma1, sigma2, theta}});
}

Kernel make_generalized_gaussian(double sigma1, double sigma2, double theta, double beta,
                                 int size) {
  return make_kernel({size, GeneralizedGaussianShape{sigma1, sigma2, theta, beta}});
}

Kernel make_plateau(double sigma1, double sigma2, double theta, double beta, int size) {
  return make_kernel({size, PlateauShape{sigma1, sigma2, theta, beta}});
}

Kernel make_sinc(double omega_c, int size) { return make_kernel({size, SincShape{omega_c}}); }

void validate(const SincSamplingConfig& cfg) {
  check_sizes(cfg.sizes);
  check_range(cfg.small_size_range, "sinc small-size cutoff");
  check_range(cfg.large_size_range, "sinc large-size cutoff");
  for (const Range& r : {cfg.small_size_range, cfg.large_size_range}) {
    check_cutoff(r.lo);
    check_cutoff(r.hi);
  }
}

void validate(const KernelSamplingConfig& cfg) {
  double total = 0.0;
  for (double p : cfg.family_probabilities) {
    check_probability(p, "kernel family probability");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("kernel family probabilities must sum to 1, got " +
                                std::to_string(total));
  }
  check_probability(cfg.sinc_probability, "sinc probability");
  check_probability(cfg.isotropic_probability, "isotropic probability");
  check_sizes(cfg.sizes);
  check_range(cfg.sigma_range, "sigma");
  if (!(cfg.sigma_range.lo > 0.0)) throw std::invalid_argument("sigma range must be positive");
  check_range(cfg.generalized_beta_range, "generalized beta");
  check_range(cfg.plateau_beta_range, "plateau beta");
  if (!(cfg.generalized_beta_range.lo > 0.0) || !(cfg.plateau_beta_range.lo > 0.0)) {
    throw std::invalid_argument("beta ranges must be positive");
  }
  check_range(cfg.theta_range, "theta");
  validate(cfg.sinc);
}

namespace {

int pick_size(const std::vector<int>& sizes, RandomSource& rng) {
  return sizes[rng.uniform_index(sizes.size())];
}

double sample_in(const Range& r, RandomSource& rng) { return rng.uniform(r.lo, r.hi); }

}  // namespace

KernelSpec sample_sinc_spec(const SincSamplingConfig& cfg, RandomSource& rng) {
  const int size = pick_size(cfg.sizes, rng);
  const Range& cutoff =
      size < cfg.small_size_threshold ? cfg.small_size_range : cfg.large_size_range;
  return {size, SincShape{sample_in(cutoff, rng)}};
}

KernelSpec sample_kernel_spec(const KernelSamplingConfig& cfg, RandomSource& rng) {
  if (rng.bernoulli(cfg.sinc_probability)) return sample_sinc_spec(cfg.sinc, rng);

  const double u = rng.uniform();
  KernelFamily family = KernelFamily::kPlateau;
  if (u < cfg.family_probabilities[0]) {
    family = KernelFamily::kGaussian;
  } else if (u < cfg.family_probabilities[0] + cfg.family_probabilities[1]) {
    family = KernelFamily::kGeneralizedGaussian;
  }

  const int size = pick_size(cfg.sizes, rng);
  double sigma1, sigma2, theta = 0.0;
  if (rng.bernoulli(cfg.isotropic_probability)) {
    sigma1 = sigma2 = sample_in(cfg.sigma_range, rng);
  } else {
    sigma1 = sample_in(cfg.sigma_range, rng);
    sigma2 = sample_in(cfg.sigma_range, rng);
    theta = sample_in(cfg.theta_range, rng);
  }

  switch (family) {
    case KernelFamily::kGaussian:
      return {size, GaussianShape{sigma1, sigma2, theta}};
    case KernelFamily::kGeneralizedGaussian:
      return {size, GeneralizedGaussianShape{sigma1, sigma2, theta,
                                             sample_in(cfg.generalized_beta_range, rng)}};
    default:
      return {size, PlateauShape{sigma1, sigma2, theta, sample_in(cfg.plateau_beta_range, rng)}};
  }
}

Kernel sample_kernel(const KernelSamplingConfig& cfg, RandomSource& rng) {
  validate(cfg);
  return make_kernel(sample_kernel_spec(cfg, rng));
}

}  // namespace degsynth
