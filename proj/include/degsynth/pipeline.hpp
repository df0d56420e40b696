#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "degsynth/config.hpp"
#include "degsynth/image.hpp"
#include "degsynth/kernels.hpp"
#include "degsynth/ops.hpp"
#include "degsynth/random.hpp"

namespace degsynth {

// Resolved operations. Every stochastic choice lives in one of these, so a
// list of them replays a degradation exactly.

struct BlurOp {
  int stage = 1;
  std::optional<KernelSpec> kernel;  // empty when the blur was skipped
  friend bool operator==(const BlurOp&, const BlurOp&) = default;
};

struct ResizeOp {
  int stage = 1;
  ResizeMode mode = ResizeMode::kBilinear;
  std::optional<double> scale;  // sampled factor; empty for the resize to target
  int height = 0;
  int width = 0;
  bool to_target = false;
  friend bool operator==(const ResizeOp&, const ResizeOp&) = default;
};

struct NoiseOp {
  int stage = 1;
  NoiseSpec noise;
  std::uint64_t seed = 0;  // stream used to draw the noise field
  friend bool operator==(const NoiseOp&, const NoiseOp&) = default;
};

struct JpegOp {
  int stage = 1;
  double quality = 95.0;
  friend bool operator==(const JpegOp&, const JpegOp&) = default;
};

/// The final low-pass step; empty when it was not applied.
struct SincOp {
  int stage = 1;
  std::optional<KernelSpec> kernel;
  friend bool operator==(const SincOp&, const SincOp&) = default;
};

using Operation = std::variant<BlurOp, ResizeOp, NoiseOp, JpegOp, SincOp>;

/// Applies one resolved operation. JPEG clamps its input and output; nothing
/// else clamps.
Image apply_operation(const Image& img, const Operation& op);

struct DegradationRecord {
  std::uint64_t stream_seed = 0;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::uint64_t> ordinal;
  int hr_height = 0;
  int hr_width = 0;
  int scale = 1;
  int order = 1;
  bool final_sinc_first = false;
  std::optional<UsmParams> gt_sharpen;
  std::vector<Operation> operations;

  friend bool operator==(const DegradationRecord&, const DegradationRecord&) = default;
};

nlohmann::json record_to_json(const DegradationRecord& rec);
DegradationRecord record_from_json(const nlohmann::json& j);
void save_record(const DegradationRecord& rec, const std::filesystem::path& path);
DegradationRecord load_record(const std::filesystem::path& path);

// Planning: sampling without touching pixels.

struct StagePlan {
  BlurOp blur;
  ResizeOp resize;
  NoiseOp noise;
  JpegOp jpeg;
};

/// Draw order: skip flag, kernel, resize mode, resize scale, noise type,
/// gray flag, noise strength, noise seed, JPEG quality.
StagePlan sample_stage(const StageConfig& cfg, int stage, int height, int width,
                       RandomSource& rng);

struct FinalPlan {
  bool sinc_first = false;
  SincOp sinc;
  ResizeOp target;
};

/// Draw order: order flag, sinc flag, sinc kernel (if applied), resize mode.
FinalPlan sample_final(const FinalStepConfig& cfg, int stage, int target_height, int target_width,
                       RandomSource& rng);

ResizeMode sample_mode(const ModeProbabilities& probs, RandomSource& rng);

/// One classical stage: blur, random resize, noise, JPEG.
std::pair<Image, std::vector<Operation>> degrade_first_order(const Image& img,
                                                             const StageConfig& cfg,
                                                             RandomSource& rng, int stage = 1);

/// `order` chained stages. The last stage ends with the resize to H/r x W/r
/// and the final sinc, placed either before or after its JPEG step.
std::pair<Image, DegradationRecord> degrade_high_order(const Image& img,
                                                       const DegradationConfig& cfg,
                                                       RandomSource& rng);

struct TrainingPair {
  Image gt;
  Image lr;
  DegradationRecord record;
};

/// gt is the (optionally USM-sharpened) HR image; lr always degrades the
/// unsharpened HR. Grayscale input is promoted to RGB.
TrainingPair synth_pair(const Image& hr, const DegradationConfig& cfg, RandomSource& rng);

/// Rebuilds (gt, lr) from a record without any random sampling.
TrainingPair replay(const Image& hr, const DegradationRecord& rec);

}  // namespace degsynth
