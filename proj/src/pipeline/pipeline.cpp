#include "degsynth/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "degsynth/jpeg.hpp"

namespace degsynth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int scaled_dim(int n, double scale) {
  return std::max(1, static_cast<int>(std::lround(n * scale)));
}

}  // namespace

ResizeMode sample_mode(const ModeProbabilities& probs, RandomSource& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  int last_enabled = 0;
  for (int i = 0; i < 3; ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_enabled = i;
    if (u < cumulative) return static_cast<ResizeMode>(i);
  }
  // Rounding can leave the cumulative sum a hair under one.
  return static_cast<ResizeMode>(last_enabled);
}

StagePlan sample_stage(const StageConfig& cfg, int stage, int height, int width,
                       RandomSource& rng) {
  StagePlan plan;
  plan.blur.stage = plan.resize.stage = plan.noise.stage = plan.jpeg.stage = stage;

  if (!rng.bernoulli(cfg.blur_skip_probability)) {
    plan.blur.kernel = sample_kernel_spec(cfg.blur, rng);
  }

  plan.resize.mode = sample_mode(cfg.resize.mode_probabilities, rng);
  const double scale = rng.uniform(cfg.resize.scale_range.lo, cfg.resize.scale_range.hi);
  plan.resize.scale = scale;
  plan.resize.height = scaled_dim(height, scale);
  plan.resize.width = scaled_dim(width, scale);

  const NoiseSamplingConfig& n = cfg.noise;
  const bool gaussian = rng.bernoulli(n.gaussian_probability);
  const bool gray = rng.bernoulli(n.gray_probability);
  if (gaussian) {
    plan.noise.noise = GaussianNoise{rng.uniform(n.sigma_range.lo, n.sigma_range.hi) / 255.0, gray};
  } else {
    plan.noise.noise = PoissonNoise{
        rng.uniform(n.poisson_scale_range.lo, n.poisson_scale_range.hi), gray, n.poisson_photons};
  }
  plan.noise.seed = rng.next_u64();

  plan.jpeg.quality = rng.uniform(cfg.jpeg.quality_range.lo, cfg.jpeg.quality_range.hi);
  return plan;
}

FinalPlan sample_final(const FinalStepConfig& cfg, int stage, int target_height, int target_width,
                       RandomSource& rng) {
  FinalPlan plan;
  plan.sinc.stage = plan.target.stage = stage;
  plan.sinc_first = rng.bernoulli(cfg.sinc_first_probability);
  if (rng.bernoulli(cfg.sinc_probability)) plan.sinc.kernel = sample_sinc_spec(cfg.sinc, rng);
  plan.target.mode = sample_mode(cfg.resize_mode_probabilities, rng);
  plan.target.height = target_height;
  plan.target.width = target_width;
  plan.target.to_target = true;
  return plan;
}

Image apply_operation(const Image& img, const Operation& op) {
  return std::visit(
      Overloaded{
          [&](const BlurOp& b) { return b.kernel ? convolve(img, make_kernel(*b.kernel)) : img; },
          [&](const ResizeOp& r) { return resize(img, r.height, r.width, r.mode); },
          [&](const NoiseOp& n) {
            RandomSource noise_rng(n.seed);
            return add_noise(img, n.noise, noise_rng);
          },
          [&](const JpegOp& j) { return jpeg_roundtrip(img, j.quality); },
          [&](const SincOp& s) { return s.kernel ? convolve(img, make_kernel(*s.kernel)) : img; },
      },
      op);
}

namespace {

Image run(Image img, const Operation& op, std::vector<Operation>& log) {
  img = apply_operation(img, op);
  log.push_back(op);
  return img;
}

}  // namespace

std::pair<Image, std::vector<Operation>> degrade_first_order(const Image& img,
                                                             const StageConfig& cfg,
                                                             RandomSource& rng, int stage) {
  const StagePlan plan = sample_stage(cfg, stage, img.height(), img.width(), rng);
  std::vector<Operation> ops;
  Image out = to_rgb(img);
  out = run(std::move(out), plan.blur, ops);
  out = run(std::move(out), plan.resize, ops);
  out = run(std::move(out), plan.noise, ops);
  out = run(std::move(out), plan.jpeg, ops);
  return {std::move(out), std::move(ops)};
}

std::pair<Image, DegradationRecord> degrade_high_order(const Image& img,
                                                       const DegradationConfig& cfg,
                                                       RandomSource& rng) {
  validate(cfg);
  if (img.height() % cfg.scale != 0 || img.width() % cfg.scale != 0) {
    throw std::invalid_argument(std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                                " input is not divisible by scale " + std::to_string(cfg.scale));
  }
  DegradationRecord rec;
  rec.stream_seed = rng.seed();
  rec.hr_height = img.height();
  rec.hr_width = img.width();
  rec.scale = cfg.scale;
  rec.order = cfg.order;

  const int target_h = img.height() / cfg.scale;
  const int target_w = img.width() / cfg.scale;
  Image out = to_rgb(img);
  for (int i = 0; i < cfg.order; ++i) {
    const int stage = i + 1;
    const StagePlan plan = sample_stage(cfg.stage(i), stage, out.height(), out.width(), rng);
    out = run(std::move(out), plan.blur, rec.operations);
    out = run(std::move(out), plan.resize, rec.operations);
    out = run(std::move(out), plan.noise, rec.operations);
    if (stage < cfg.order) {
      out = run(std::move(out), plan.jpeg, rec.operations);
      continue;
    }
    const FinalPlan final_plan = sample_final(cfg.final_step, stage, target_h, target_w, rng);
    rec.final_sinc_first = final_plan.sinc_first;
    if (final_plan.sinc_first) {
      out = run(std::move(out), final_plan.target, rec.operations);
      out = run(std::move(out), final_plan.sinc, rec.operations);
      out = run(std::move(out), plan.jpeg, rec.operations);
    } else {
      out = run(std::move(out), plan.jpeg, rec.operations);
      out = run(std::move(out), final_plan.target, rec.operations);
      out = run(std::move(out), final_plan.sinc, rec.operations);
    }
  }
  return {clamp_finalize(std::move(out)), std::move(rec)};
}

TrainingPair synth_pair(const Image& hr, const DegradationConfig& cfg, RandomSource& rng) {
  const Image rgb = to_rgb(hr);
  auto [lr, rec] = degrade_high_order(rgb, cfg, rng);
  rec.gt_sharpen = cfg.gt_sharpen;
  Image gt = cfg.gt_sharpen ? usm_sharpen(rgb, *cfg.gt_sharpen) : rgb;
  return {std::move(gt), std::move(lr), std::move(rec)};
}

TrainingPair replay(const Image& hr, const DegradationRecord& rec) {
  if (hr.height() != rec.hr_height || hr.width() != rec.hr_width) {
    throw std::invalid_argument("replay: HR image is " + std::to_string(hr.height()) + "x" +
                                std::to_string(hr.width()) + " but the record expects " +
                                std::to_string(rec.hr_height) + "x" + std::to_string(rec.hr_width));
  }
  const Image rgb = to_rgb(hr);
  Image lr = rgb;
  for (const Operation& op : rec.operations) lr = apply_operation(lr, op);
  Image gt = rec.gt_sharpen ? usm_sharpen(rgb, *rec.gt_sharpen) : rgb;
  return {std::move(gt), clamp_finalize(std::move(lr)), rec};
}

}  // namespace degsynth
