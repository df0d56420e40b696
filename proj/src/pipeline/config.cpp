#include "degsynth/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace degsynth {

using nlohmann::json;

StageConfig default_stage1() { return StageConfig{}; }

StageConfig default_stage2() {
  StageConfig s;
  s.blur_skip_probability = 0.2;
  s.blur.sigma_range = {0.2, 1.5};
  s.resize.scale_range = {0.3, 1.2};
  s.noise.sigma_range = {1.0, 25.0};
  s.noise.poisson_scale_range = {0.05, 2.5};
  return s;
}

DegradationConfig default_config() {
  DegradationConfig cfg;
  cfg.stage1 = default_stage1();
  cfg.stage2 = default_stage2();
  return cfg;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_probability(double p, const std::string& what) {
  require(p >= 0.0 && p <= 1.0, what + " must lie in [0,1]");
}

void check_range(const Range& r, const std::string& what) {
  require(r.lo <= r.hi, what + " range is empty");
}

void check_modes(const ModeProbabilities& probs, const std::string& what) {
  double total = 0.0;
  for (double p : probs) {
    check_probability(p, what);
    total += p;
  }
  require(std::fabs(total - 1.0) <= 1e-9, what + " must sum to 1");
}

void validate_stage(const StageConfig& s, const std::string& name) {
  check_probability(s.blur_skip_probability, name + ".blur.skip_probability");
  validate(s.blur);
  check_modes(s.resize.mode_probabilities, name + ".resize.mode_probabilities");
  check_range(s.resize.scale_range, name + ".resize.scale_range");
  require(s.resize.scale_range.lo > 0.0, name + ".resize.scale_range must be positive");
  check_probability(s.noise.gaussian_probability, name + ".noise.gaussian_probability");
  check_probability(s.noise.gray_probability, name + ".noise.gray_probability");
  check_range(s.noise.sigma_range, name + ".noise.sigma_range");
  require(s.noise.sigma_range.lo >= 0.0, name + ".noise.sigma_range must be >= 0");
  check_range(s.noise.poisson_scale_range, name + ".noise.poisson_scale_range");
  require(s.noise.poisson_scale_range.lo >= 0.0, name + ".noise.poisson_scale_range must be >= 0");
  require(s.noise.poisson_photons > 0.0, name + ".noise.poisson_photons must be > 0");
  check_range(s.jpeg.quality_range, name + ".jpeg.quality_range");
  require(s.jpeg.quality_range.lo >= 1.0 && s.jpeg.quality_range.hi <= 100.0,
          name + ".jpeg.quality_range must lie in [1, 100]");
}

// Visits the keys of one JSON object and rejects any that were not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j.is_object(), path_ + " must be an object");
  }

  template <class F>
  void field(const std::string& key, F&& read) {
    seen_.insert(key);
    if (j_.contains(key)) read(j_.at(key), path_ + "." + key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      require(seen_.contains(item.key()), "unknown config key " + path_ + "." + item.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double read_number(const json& j, const std::string& path) {
  require(j.is_number(), path + " must be a number");
  return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
  require(j.is_number_integer(), path + " must be an integer");
  return j.get<int>();
}

Range read_range(const json& j, const std::string& path) {
  require(j.is_array() && j.size() == 2, path + " must be a [lo, hi] pair");
  return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

std::vector<int> read_sizes(const json& j, const std::string& path) {
  require(j.is_array(), path + " must be an array");
  std::vector<int> sizes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    sizes.push_back(read_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return sizes;
}

ModeProbabilities read_modes(const json& j, const std::string& path) {
  ModeProbabilities probs{0.0, 0.0, 0.0};
  ObjectReader r(j, path);
  r.field("area", [&](const json& v, const std::string& p) { probs[0] = read_number(v, p); });
  r.field("bilinear", [&](const json& v, const std::string& p) { probs[1] = read_number(v, p); });
  r.field("bicubic", [&](const json& v, const std::string& p) { probs[2] = read_number(v, p); });
  r.finish();
  return probs;
}

void read_sinc(const json& j, const std::string& path, SincSamplingConfig& s) {
  ObjectReader r(j, path);
  r.field("sizes", [&](const json& v, const std::string& p) { s.sizes = read_sizes(v, p); });
  r.field("omega_small_size_range",
          [&](const json& v, const std::string& p) { s.small_size_range = read_range(v, p); });
  r.field("omega_large_size_range",
          [&](const json& v, const std::string& p) { s.large_size_range = read_range(v, p); });
  r.field("small_size_threshold",
          [&](const json& v, const std::string& p) { s.small_size_threshold = read_int(v, p); });
  r.finish();
}

void read_blur(const json& j, const std::string& path, StageConfig& s) {
  KernelSamplingConfig& k = s.blur;
  ObjectReader r(j, path);
  r.field("skip_probability",
          [&](const json& v, const std::string& p) { s.blur_skip_probability = read_number(v, p); });
  r.field("family_probabilities", [&](const json& v, const std::string& p) {
    ObjectReader f(v, p);
    f.field("gaussian", [&](const json& x, const std::string& q) {
      k.family_probabilities[0] = read_number(x, q);
    });
    f.field("generalized_gaussian", [&](const json& x, const std::string& q) {
      k.family_probabilities[1] = read_number(x, q);
    });
    f.field("plateau", [&](const json& x, const std::string& q) {
      k.family_probabilities[2] = read_number(x, q);
    });
    f.finish();
  });
  r.field("sinc_probability",
          [&](const json& v, const std::string& p) { k.sinc_probability = read_number(v, p); });
  r.field("isotropic_probability",
          [&](const json& v, const std::string& p) { k.isotropic_probability = read_number(v, p); });
  r.field("sizes", [&](const json& v, const std::string& p) { k.sizes = read_sizes(v, p); });
  r.field("sigma_range",
          [&](const json& v, const std::string& p) { k.sigma_range = read_range(v, p); });
  r.field("generalized_beta_range",
          [&](const json& v, const std::string& p) { k.generalized_beta_range = read_range(v, p); });
  r.field("plateau_beta_range",
          [&](const json& v, const std::string& p) { k.plateau_beta_range = read_range(v, p); });
  r.field("theta_range",
          [&](const json& v, const std::string& p) { k.theta_range = read_range(v, p); });
  r.field("sinc", [&](const json& v, const std::string& p) { read_sinc(v, p, k.sinc); });
  r.finish();
}

void read_stage(const json& j, const std::string& path, StageConfig& s) {
  ObjectReader r(j, path);
  r.field("blur", [&](const json& v, const std::string& p) { read_blur(v, p, s); });
  r.field("resize", [&](const json& v, const std::string& p) {
    ObjectReader rr(v, p);
    rr.field("mode_probabilities", [&](const json& x, const std::string& q) {
      s.resize.mode_probabilities = read_modes(x, q);
    });
    rr.field("scale_range",
             [&](const json& x, const std::string& q) { s.resize.scale_range = read_range(x, q); });
    rr.finish();
  });
  r.field("noise", [&](const json& v, const std::string& p) {
    NoiseSamplingConfig& n = s.noise;
    ObjectReader nr(v, p);
    nr.field("gaussian_probability",
             [&](const json& x, const std::string& q) { n.gaussian_probability = read_number(x, q); });
    nr.field("sigma_range",
             [&](const json& x, const std::string& q) { n.sigma_range = read_range(x, q); });
    nr.field("poisson_scale_range",
             [&](const json& x, const std::string& q) { n.poisson_scale_range = read_range(x, q); });
    nr.field("gray_probability",
             [&](const json& x, const std::string& q) { n.gray_probability = read_number(x, q); });
    nr.field("poisson_photons",
             [&](const json& x, const std::string& q) { n.poisson_photons = read_number(x, q); });
    nr.finish();
  });
  r.field("jpeg", [&](const json& v, const std::string& p) {
    ObjectReader jr(v, p);
    jr.field("quality_range",
             [&](const json& x, const std::string& q) { s.jpeg.quality_range = read_range(x, q); });
    jr.finish();
  });
  r.finish();
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

json modes_json(const ModeProbabilities& p) {
  return {{"area", p[0]}, {"bilinear", p[1]}, {"bicubic", p[2]}};
}

json sinc_json(const SincSamplingConfig& s) {
  return {{"sizes", s.sizes},
          {"omega_small_size_range", range_json(s.small_size_range)},
          {"omega_large_size_range", range_json(s.large_size_range)},
          {"small_size_threshold", s.small_size_threshold}};
}

json stage_json(const StageConfig& s) {
  const KernelSamplingConfig& k = s.blur;
  return {
      {"blur",
       {{"skip_probability", s.blur_skip_probability},
        {"family_probabilities",
         {{"gaussian", k.family_probabilities[0]},
          {"generalized_gaussian", k.family_probabilities[1]},
          {"plateau", k.family_probabilities[2]}}},
        {"sinc_probability", k.sinc_probability},
        {"isotropic_probability", k.isotropic_probability},
        {"sizes", k.sizes},
        {"sigma_range", range_json(k.sigma_range)},
        {"generalized_beta_range", range_json(k.generalized_beta_range)},
        {"plateau_beta_range", range_json(k.plateau_beta_range)},
        {"theta_range", range_json(k.theta_range)},
        {"sinc", sinc_json(k.sinc)}}},
      {"resize",
       {{"mode_probabilities", modes_json(s.resize.mode_probabilities)},
        {"scale_range", range_json(s.resize.scale_range)}}},
      {"noise",
       {{"gaussian_probability", s.noise.gaussian_probability},
        {"sigma_range", range_json(s.noise.sigma_range)},
        {"poisson_scale_range", range_json(s.noise.poisson_scale_range)},
        {"gray_probability", s.noise.gray_probability},
        {"poisson_photons", s.noise.poisson_photons}}},
      {"jpeg", {{"quality_range", range_json(s.jpeg.quality_range)}}},
  };
}

}  // namespace

void validate(const DegradationConfig& cfg) {
  require(cfg.order >= 1, "order must be >= 1");
  require(cfg.scale == 1 || cfg.scale == 2 || cfg.scale == 4, "scale must be 1, 2 or 4");
  validate_stage(cfg.stage1, "stage1");
  if (cfg.order > 1) validate_stage(cfg.stage2, "stage2");
  check_probability(cfg.final_step.sinc_probability, "final.sinc_probability");
  check_probability(cfg.final_step.sinc_first_probability, "final.sinc_first_probability");
  validate(cfg.final_step.sinc);
  check_modes(cfg.final_step.resize_mode_probabilities, "final.resize_mode_probabilities");
  if (cfg.gt_sharpen) {
    require(cfg.gt_sharpen->sigma > 0.0, "gt_sharpen.sigma must be > 0");
    require(cfg.gt_sharpen->weight >= 0.0, "gt_sharpen.weight must be >= 0");
    check_probability(cfg.gt_sharpen->threshold, "gt_sharpen.threshold");
  }
}

DegradationConfig config_from_json(const json& j) {
  DegradationConfig cfg = default_config();
  ObjectReader r(j, "config");
  r.field("order", [&](const json& v, const std::string& p) { cfg.order = read_int(v, p); });
  r.field("scale", [&](const json& v, const std::string& p) { cfg.scale = read_int(v, p); });
  r.field("stage1", [&](const json& v, const std::string& p) { read_stage(v, p, cfg.stage1); });
  r.field("stage2", [&](const json& v, const std::string& p) { read_stage(v, p, cfg.stage2); });
  r.field("final", [&](const json& v, const std::string& p) {
    FinalStepConfig& f = cfg.final_step;
    ObjectReader fr(v, p);
    fr.field("sinc_probability",
             [&](const json& x, const std::string& q) { f.sinc_probability = read_number(x, q); });
    fr.field("sinc_first_probability", [&](const json& x, const std::string& q) {
      f.sinc_first_probability = read_number(x, q);
    });
    fr.field("sinc", [&](const json& x, const std::string& q) { read_sinc(x, q, f.sinc); });
    fr.field("resize_mode_probabilities", [&](const json& x, const std::string& q) {
      f.resize_mode_probabilities = read_modes(x, q);
    });
    fr.finish();
  });
  r.field("gt_sharpen", [&](const json& v, const std::string& p) {
    if (v.is_null()) {
      cfg.gt_sharpen.reset();
      return;
    }
    UsmParams usm;
    ObjectReader ur(v, p);
    ur.field("sigma", [&](const json& x, const std::string& q) { usm.sigma = read_number(x, q); });
    ur.field("weight", [&](const json& x, const std::string& q) { usm.weight = read_number(x, q); });
    ur.field("threshold",
             [&](const json& x, const std::string& q) { usm.threshold = read_number(x, q); });
    ur.finish();
    cfg.gt_sharpen = usm;
  });
  r.finish();
  validate(cfg);
  return cfg;
}

json config_to_json(const DegradationConfig& cfg) {
  json gt = nullptr;
  if (cfg.gt_sharpen) {
    gt = {{"sigma", cfg.gt_sharpen->sigma},
          {"weight", cfg.gt_sharpen->weight},
          {"threshold", cfg.gt_sharpen->threshold}};
  }
  return {
      {"order", cfg.order},
      {"scale", cfg.scale},
      {"stage1", stage_json(cfg.stage1)},
      {"stage2", stage_json(cfg.stage2)},
      {"final",
       {{"sinc_probability", cfg.final_step.sinc_probability},
        {"sinc_first_probability", cfg.final_step.sinc_first_probability},
        {"sinc", sinc_json(cfg.final_step.sinc)},
        {"resize_mode_probabilities", modes_json(cfg.final_step.resize_mode_probabilities)}}},
      {"gt_sharpen", gt},
  };
}

DegradationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace degsynth
