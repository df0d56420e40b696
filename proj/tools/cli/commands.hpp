#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "degsynth/config.hpp"
#include "degsynth/kernels.hpp"
#include "degsynth/ops.hpp"

namespace degsynth::cli {

inline constexpr const char* kEngineVersion = DEGSYNTH_VERSION;

struct SynthOptions {
  std::filesystem::path hr_dir;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config_path;  // built-in defaults when empty
  std::uint64_t seed = 0;
  std::optional<int> scale;  // overrides the config's scale
  int workers = 1;
};

struct PairEntry {
  std::uint64_t ordinal = 0;
  std::string input;
  std::string lr;
  std::string gt;
  std::string record;
};

struct FailureEntry {
  std::uint64_t ordinal = 0;
  std::string input;
  std::string error;
};

/// Everything needed to regenerate a synth run: the exact config, the master
/// seed and the sorted inputs. The worker count is deliberately absent so that
/// runs with different parallelism produce identical trees.
struct RunManifest {
  std::string engine_version = kEngineVersion;
  std::uint64_t seed = 0;
  std::string hr_dir;
  nlohmann::json config;
  std::vector<std::string> inputs;
  std::vector<PairEntry> pairs;
  std::vector<FailureEntry> failures;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Writes lr/, gt/, records/ and manifest.json under out_dir. Per-file
/// failures are collected in the manifest rather than thrown; setup errors
/// (missing directory, bad config) throw.
RunManifest cmd_synth(const SynthOptions& opts, std::ostream& log);

/// Regenerates a run from its manifest. `hr_dir` overrides the recorded one.
RunManifest cmd_synth_from_manifest(const std::filesystem::path& manifest,
                                    const std::filesystem::path& out_dir,
                                    const std::optional<std::filesystem::path>& hr_dir, int workers,
                                    std::ostream& log);

/// Writes <prefix>.csv (full precision) and <prefix>.png (min-max normalized).
void cmd_kernel(const KernelSpec& spec, const std::filesystem::path& prefix, int zoom = 1);

std::string kernel_csv(const Kernel& kernel);

struct ApplyOptions {
  std::string op;  // blur, resize, noise, jpeg, sinc, usm
  std::optional<KernelSpec> kernel;           // blur, sinc
  std::optional<ResizeMode> mode;             // resize
  std::optional<double> scale;                // resize factor, or Poisson scale
  std::optional<int> height, width;           // resize target
  std::string noise_type = "gaussian";        // noise
  double sigma = 0.0;                         // noise sigma (8-bit units) or USM sigma
  bool gray = false;
  double photons = 256.0;
  std::uint64_t seed = 0;
  double quality = 95.0;                      // jpeg
  UsmParams usm;                              // usm
};

void cmd_apply(const std::filesystem::path& in, const std::filesystem::path& out,
               const ApplyOptions& opts);

/// Dimensions, per-channel mean and variance, a radial spectrum of the
/// luminance, and PSNR against `reference` when given.
void cmd_stats(const std::filesystem::path& image,
               const std::optional<std::filesystem::path>& reference, int bins, std::ostream& out);

struct PoolBenchOptions {
  int producers = 1;
  int pairs = 64;
  int batch = 8;
  int capacity = 180;
  int hr_size = 256;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> config_path;
};

struct PoolBenchResult {
  int pairs = 0;
  double seconds = 0.0;
  double pairs_per_second = 0.0;
};

/// Producers synthesize pairs from a fixed HR texture into a PairPool while
/// one consumer drains it in batches.
PoolBenchResult cmd_pool_bench(const PoolBenchOptions& opts);

int run_main(int argc, char** argv);

}  // namespace degsynth::cli
