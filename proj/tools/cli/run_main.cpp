#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"

namespace degsynth::cli {

namespace {

struct KernelFlags {
  std::string family = "gaussian";
  int size = 21;
  double sigma1 = 2.0;
  std::optional<double> sigma2;
  double theta = 0.0;
  double beta = 1.0;
  double omega_c = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--family", family, "gaussian, generalized_gaussian, plateau or sinc");
    app->add_option("--size", size, "odd kernel size");
    app->add_option("--sigma1", sigma1, "major-axis sigma");
    app->add_option("--sigma2", sigma2, "minor-axis sigma (defaults to sigma1)");
    app->add_option("--theta", theta, "rotation in radians");
    app->add_option("--beta", beta, "shape exponent");
    app->add_option("--omega-c", omega_c, "sinc cutoff in radians");
  }

  KernelSpec spec() const {
    const double s2 = sigma2.value_or(sigma1);
    KernelSpec spec;
    spec.size = size;
    switch (parse_family(family)) {
      case KernelFamily::kGaussian:
        spec.shape = GaussianShape{sigma1, s2, theta};
        break;
      case KernelFamily::kGeneralizedGaussian:
        spec.shape = GeneralizedGaussianShape{sigma1, s2, theta, beta};
        break;
      case KernelFamily::kPlateau:
        spec.shape = PlateauShape{sigma1, s2, theta, beta};
        break;
      case KernelFamily::kSinc:
        spec.shape = SincShape{omega_c};
        break;
    }
    return spec;
  }
};

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"Synthetic degradation engine for super-resolution training pairs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  SynthOptions synth;
  std::string from_manifest;
  std::string scale_text;
  auto* synth_cmd = app.add_subcommand("synth", "degrade every PNG in a directory");
  synth_cmd->add_option("--hr", synth.hr_dir, "directory of HR PNGs");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--config", synth.config_path, "config profile (JSON)");
  synth_cmd->add_option("--seed", synth.seed, "master seed");
  synth_cmd->add_option("--scale", synth.scale, "override the config scale (1, 2 or 4)");
  synth_cmd->add_option("--workers", synth.workers, "parallel workers")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--from-manifest", from_manifest, "replay a previous run's manifest.json");

  KernelFlags kernel_flags;
  std::string kernel_prefix;
  int zoom = 1;
  auto* kernel_cmd = app.add_subcommand("kernel", "write a kernel as CSV and PNG");
  kernel_flags.add_to(kernel_cmd);
  kernel_cmd->add_option("--out", kernel_prefix, "output prefix")->required();
  kernel_cmd->add_option("--zoom", zoom, "PNG magnification");

  ApplyOptions apply;
  KernelFlags apply_kernel;
  std::string apply_in, apply_out, apply_mode;
  std::optional<double> usm_sigma;
  auto* apply_cmd = app.add_subcommand("apply", "apply one degradation to an image");
  apply_cmd->add_option("op", apply.op, "blur, resize, noise, jpeg, sinc or usm")->required();
  apply_cmd->add_option("--in", apply_in, "input PNG")->required();
  apply_cmd->add_option("--out", apply_out, "output PNG")->required();
  apply_kernel.add_to(apply_cmd);
  apply_cmd->add_option("--mode", apply_mode, "area, bilinear or bicubic");
  apply_cmd->add_option("--scale", apply.scale, "resize factor, or Poisson scale");
  apply_cmd->add_option("--height", apply.height, "resize target height");
  apply_cmd->add_option("--width", apply.width, "resize target width");
  apply_cmd->add_option("--noise", apply.noise_type, "gaussian or poisson");
  apply_cmd->add_option("--sigma", apply.sigma, "noise sigma in 8-bit units");
  apply_cmd->add_flag("--gray", apply.gray, "same noise in every channel");
  apply_cmd->add_option("--photons", apply.photons, "Poisson photon count at full intensity");
  apply_cmd->add_option("--seed", apply.seed, "noise seed");
  apply_cmd->add_option("--quality", apply.quality, "JPEG quality in [1, 100]");
  apply_cmd->add_option("--usm-sigma", usm_sigma, "USM blur sigma");
  apply_cmd->add_option("--usm-weight", apply.usm.weight, "USM weight");
  apply_cmd->add_option("--usm-threshold", apply.usm.threshold, "USM threshold in [0, 1]");

  std::string stats_image;
  std::optional<std::filesystem::path> stats_ref;
  int bins = 16;
  auto* stats_cmd = app.add_subcommand("stats", "report statistics of an image");
  stats_cmd->add_option("image", stats_image, "PNG to inspect")->required();
  stats_cmd->add_option("--ref", stats_ref, "reference PNG for PSNR");
  stats_cmd->add_option("--bins", bins, "radial spectrum bins");

  PoolBenchOptions bench;
  auto* bench_cmd = app.add_subcommand("pool-bench", "measure pool throughput");
  bench_cmd->add_option("--producers", bench.producers, "producer threads");
  bench_cmd->add_option("--pairs", bench.pairs, "pairs to synthesize");
  bench_cmd->add_option("--batch", bench.batch, "batch size");
  bench_cmd->add_option("--capacity", bench.capacity, "pool capacity");
  bench_cmd->add_option("--hr-size", bench.hr_size, "HR texture side");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--config", bench.config_path, "config profile (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      RunManifest m;
      if (!from_manifest.empty()) {
        std::optional<std::filesystem::path> hr;
        if (!synth.hr_dir.empty()) hr = synth.hr_dir;
        m = cmd_synth_from_manifest(from_manifest, synth.out_dir, hr, synth.workers, std::cerr);
      } else {
        if (synth.hr_dir.empty()) throw std::invalid_argument("synth needs --hr or --from-manifest");
        m = cmd_synth(synth, std::cerr);
      }
      return m.failures.empty() ? 0 : 1;
    }
    if (kernel_cmd->parsed()) {
      cmd_kernel(kernel_flags.spec(), kernel_prefix, zoom);
      return 0;
    }
    if (apply_cmd->parsed()) {
      if (apply.op == "blur" || apply.op == "sinc") {
        if (apply.op == "sinc") apply_kernel.family = "sinc";
        apply.kernel = apply_kernel.spec();
      }
      if (!apply_mode.empty()) apply.mode = parse_mode(apply_mode);
      if (usm_sigma) apply.usm.sigma = *usm_sigma;
      cmd_apply(apply_in, apply_out, apply);
      return 0;
    }
    if (stats_cmd->parsed()) {
      cmd_stats(stats_image, stats_ref, bins, std::cout);
      return 0;
    }
    if (bench_cmd->parsed()) {
      const PoolBenchResult r = cmd_pool_bench(bench);
      std::printf("pool-bench: %d pairs in %.3f s, %.2f pairs/s\n", r.pairs, r.seconds,
                  r.pairs_per_second);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace degsynth::cli
