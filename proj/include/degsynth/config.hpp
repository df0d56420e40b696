#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "json.hpp"

#include "degsynth/kernels.hpp"
#include "degsynth/ops.hpp"

namespace degsynth {

/// Probabilities are indexed area, bilinear, bicubic and must sum to 1.
using ModeProbabilities = std::array<double, 3>;

struct ResizeSamplingConfig {
  ModeProbabilities mode_probabilities{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  /// Scale relative to the stage's input size.
  Range scale_range{0.15, 1.5};
};

struct NoiseSamplingConfig {
  double gaussian_probability = 0.5;  // Poisson otherwise
  Range sigma_range{1.0, 30.0};       // 8-bit units, divided by 255 when applied
  Range poisson_scale_range{0.05, 3.0};
  double gray_probability = 0.4;
  double poisson_photons = 256.0;
};

struct JpegSamplingConfig {
  Range quality_range{30.0, 95.0};
};

struct StageConfig {
  double blur_skip_probability = 0.0;
  KernelSamplingConfig blur;
  ResizeSamplingConfig resize;
  NoiseSamplingConfig noise;
  JpegSamplingConfig jpeg;
};

struct FinalStepConfig {
  double sinc_probability = 0.8;
  /// Probability of [resize + sinc, then JPEG] over [JPEG, then resize + sinc].
  double sinc_first_probability = 0.5;
  SincSamplingConfig sinc;
  ModeProbabilities resize_mode_probabilities{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

struct DegradationConfig {
  int order = 2;
  int scale = 4;
  StageConfig stage1;
  StageConfig stage2;
  FinalStepConfig final_step;
  std::optional<UsmParams> gt_sharpen;

  /// Stage i (0-based) uses stage1 for i == 0 and stage2 afterwards.
  const StageConfig& stage(int i) const { return i == 0 ? stage1 : stage2; }
};

StageConfig default_stage1();
StageConfig default_stage2();
DegradationConfig default_config();

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const DegradationConfig& cfg);

/// Strict parse: unknown keys are errors; missing keys keep their defaults.
DegradationConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const DegradationConfig& cfg);

DegradationConfig load_config(const std::filesystem::path& path);

}  // namespace degsynth
