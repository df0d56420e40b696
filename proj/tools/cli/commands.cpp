#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "degsynth/analysis.hpp"
#include "degsynth/jpeg.hpp"
#include "degsynth/pipeline.hpp"
#include "degsynth/png_io.hpp"
#include "degsynth/pool.hpp"

namespace degsynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "degsynth-manifest/1";

bool is_png(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

// Sorted by file name so directory enumeration order never matters.
std::vector<std::string> list_inputs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_png(entry.path())) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DegradationConfig config_or_default(const std::optional<fs::path>& path) {
  return path ? load_config(*path) : default_config();
}

RunManifest run_synth(const DegradationConfig& cfg, std::uint64_t seed, const fs::path& hr_dir,
                      const std::string& hr_dir_label, const std::vector<std::string>& inputs,
                      const fs::path& out_dir, int workers, std::ostream& log) {
  validate(cfg);
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (const char* sub : {"lr", "gt", "records"}) fs::create_directories(out_dir / sub);

  std::vector<std::optional<PairEntry>> done(inputs.size());
  std::vector<std::optional<FailureEntry>> failed(inputs.size());
  std::atomic<std::size_t> next = 0;
  std::mutex log_mutex;
  const RandomSource master(seed);

  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      const std::string& name = inputs[i];
      const std::string stem = fs::path(name).stem().string();
      try {
        const Image hr = load_png(hr_dir / name);
        RandomSource rng = master.child(i);
        TrainingPair pair = synth_pair(hr, cfg, rng);
        pair.record.master_seed = seed;
        pair.record.ordinal = i;
        PairEntry entry{i, name, "lr/" + stem + ".png", "gt/" + stem + ".png",
                        "records/" + stem + ".json"};
        save_png(pair.lr, out_dir / entry.lr);
        save_png(pair.gt, out_dir / entry.gt);
        save_record(pair.record, out_dir / entry.record);
        done[i] = std::move(entry);
      } catch (const std::exception& e) {
        failed[i] = FailureEntry{i, name, e.what()};
        std::lock_guard lock(log_mutex);
        log << "error: " << name << ": " << e.what() << '\n';
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  RunManifest m;
  m.seed = seed;
  m.hr_dir = hr_dir_label;
  m.config = config_to_json(cfg);
  m.inputs = inputs;
  for (auto& d : done)
    if (d) m.pairs.push_back(std::move(*d));
  for (auto& f : failed)
    if (f) m.failures.push_back(std::move(*f));
  write_text(out_dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");
  log << "synth: " << m.pairs.size() << " pair(s) written, " << m.failures.size() << " failed\n";
  return m;
}

Image synthetic_texture(int size, std::uint64_t seed) {
  RandomSource rng(seed);
  Image img(size, size, 3);
  for (int c = 0; c < 3; ++c) {
    const double fx = rng.uniform(0.02, 0.3), fy = rng.uniform(0.02, 0.3);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double edge = x > size / 2 ? 0.25 : 0.0;
        img.at(c, y, x) = std::clamp(
            0.35 + edge + 0.2 * std::sin(fx * x) * std::cos(fy * y) + 0.05 * rng.normal(), 0.0, 1.0);
      }
  }
  return img;
}

}  // namespace

json manifest_to_json(const RunManifest& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) {
    pairs.push_back({{"ordinal", p.ordinal}, {"input", p.input}, {"lr", p.lr}, {"gt", p.gt},
                     {"record", p.record}});
  }
  json failures = json::array();
  for (const auto& f : m.failures) {
    failures.push_back({{"ordinal", f.ordinal}, {"input", f.input}, {"error", f.error}});
  }
  return {{"format", kManifestFormat}, {"engine_version", m.engine_version},
          {"seed", m.seed},            {"hr_dir", m.hr_dir},
          {"config", m.config},        {"inputs", m.inputs},
          {"pairs", pairs},            {"failures", failures}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kManifestFormat) {
      throw std::invalid_argument("unsupported manifest format");
    }
    RunManifest m;
    m.engine_version = j.at("engine_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.hr_dir = j.at("hr_dir").get<std::string>();
    m.config = j.at("config");
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    for (const auto& p : j.at("pairs")) {
      m.pairs.push_back({p.at("ordinal").get<std::uint64_t>(), p.at("input").get<std::string>(),
                         p.at("lr").get<std::string>(), p.at("gt").get<std::string>(),
                         p.at("record").get<std::string>()});
    }
    for (const auto& f : j.at("failures")) {
      m.failures.push_back({f.at("ordinal").get<std::uint64_t>(), f.at("input").get<std::string>(),
                            f.at("error").get<std::string>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
}

RunManifest cmd_synth(const SynthOptions& opts, std::ostream& log) {
  DegradationConfig cfg = config_or_default(opts.config_path);
  if (opts.scale) cfg.scale = *opts.scale;
  const auto inputs = list_inputs(opts.hr_dir);
  return run_synth(cfg, opts.seed, opts.hr_dir, opts.hr_dir.string(), inputs, opts.out_dir,
                   opts.workers, log);
}

RunManifest cmd_synth_from_manifest(const fs::path& manifest, const fs::path& out_dir,
                                    const std::optional<fs::path>& hr_dir, int workers,
                                    std::ostream& log) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open " + manifest.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(manifest.string() + ": " + e.what());
  }
  const RunManifest m = manifest_from_json(j);
  if (m.engine_version != kEngineVersion) {
    log << "warning: manifest written by engine " << m.engine_version << ", replaying with "
        << kEngineVersion << '\n';
  }
  const fs::path dir = hr_dir ? *hr_dir : fs::path(m.hr_dir);
  return run_synth(config_from_json(m.config), m.seed, dir, m.hr_dir, m.inputs, out_dir, workers,
                   log);
}

std::string kernel_csv(const Kernel& kernel) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (int dy = -kernel.radius(); dy <= kernel.radius(); ++dy) {
    for (int dx = -kernel.radius(); dx <= kernel.radius(); ++dx) {
      if (dx > -kernel.radius()) out << ',';
      out << kernel.at(dy, dx);
    }
    out << '\n';
  }
  return out.str();
}

void cmd_kernel(const KernelSpec& spec, const fs::path& prefix, int zoom) {
  if (zoom < 1) throw std::invalid_argument("zoom must be >= 1");
  const Kernel kernel = make_kernel(spec);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  write_text(fs::path(prefix.string() + ".csv"), kernel_csv(kernel));

  const auto [lo, hi] = std::minmax_element(kernel.weights().begin(), kernel.weights().end());
  const double span = *hi - *lo;
  const int n = kernel.size() * zoom;
  Image vis(n, n, 1);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double w = kernel.at(y / zoom - kernel.radius(), x / zoom - kernel.radius());
      vis.at(0, y, x) = span > 0.0 ? (w - *lo) / span : 1.0;
    }
  save_png(vis, prefix.string() + ".png");
}

void cmd_apply(const fs::path& in, const fs::path& out, const ApplyOptions& opts) {
  const Image img = load_png(in);
  Image result;
  if (opts.op == "blur" || opts.op == "sinc") {
    if (!opts.kernel) throw std::invalid_argument(opts.op + " needs a kernel");
    const bool is_sinc = family_of(*opts.kernel) == KernelFamily::kSinc;
    if (is_sinc != (opts.op == "sinc")) {
      throw std::invalid_argument(opts.op == "sinc" ? "sinc needs --omega-c"
                                                    : "blur takes a non-sinc kernel family");
    }
    result = convolve(img, make_kernel(*opts.kernel));
  } else if (opts.op == "resize") {
    int h = 0, w = 0;
    if (opts.scale) {
      h = std::max(1, static_cast<int>(std::lround(img.height() * *opts.scale)));
      w = std::max(1, static_cast<int>(std::lround(img.width() * *opts.scale)));
    } else if (opts.height && opts.width) {
      h = *opts.height;
      w = *opts.width;
    } else {
      throw std::invalid_argument("resize needs --scale or both --height and --width");
    }
    result = resize(img, h, w, opts.mode.value_or(ResizeMode::kBilinear));
  } else if (opts.op == "noise") {
    RandomSource rng(opts.seed);
    NoiseSpec spec;
    if (opts.noise_type == "gaussian") {
      spec = GaussianNoise{opts.sigma / 255.0, opts.gray};
    } else if (opts.noise_type == "poisson") {
      spec = PoissonNoise{opts.scale.value_or(1.0), opts.gray, opts.photons};
    } else {
      throw std::invalid_argument("unknown noise type '" + opts.noise_type + "'");
    }
    result = add_noise(img, spec, rng);
  } else if (opts.op == "jpeg") {
    result = jpeg_roundtrip(to_rgb(img), opts.quality);
  } else if (opts.op == "usm") {
    result = usm_sharpen(img, opts.usm);
  } else {
    throw std::invalid_argument("unknown op '" + opts.op + "'");
  }
  save_png(result, out);
}

void cmd_stats(const fs::path& image, const std::optional<fs::path>& reference, int bins,
               std::ostream& out) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const Image img = load_png(image);
  out << "image: " << image.string() << '\n';
  out << "size: " << img.height() << "x" << img.width() << ", " << img.channels() << " channel(s)\n";
  out << std::setprecision(6) << std::fixed;
  for (int c = 0; c < img.channels(); ++c) {
    double sum = 0.0, sq = 0.0;
    for (double v : img.plane(c)) sum += v;
    const double mean = sum / static_cast<double>(img.plane_size());
    for (double v : img.plane(c)) sq += (v - mean) * (v - mean);
    out << "channel " << c << ": mean " << mean << ", variance "
        << sq / static_cast<double>(img.plane_size()) << '\n';
  }
  if (reference) {
    const double p = psnr(img, load_png(*reference));
    if (std::isinf(p)) {
      out << "psnr: identical\n";
    } else {
      out << "psnr: " << std::setprecision(3) << p << " dB\n" << std::setprecision(6);
    }
  }

  Image luma(img.height(), img.width(), 1);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    luma.plane(0)[i] = img.channels() == 1 ? img.plane(0)[i]
                                           : 0.299 * img.plane(0)[i] + 0.587 * img.plane(1)[i] +
                                                 0.114 * img.plane(2)[i];
  }
  const RadialSpectrum rs = radial_power_spectrum(luma, bins);
  out << "radial spectrum of luminance (" << bins << " bins over [0, pi]):\n";
  out << std::scientific << std::setprecision(4);
  for (const RadialBin& b : rs.bins) {
    out << "  [" << std::fixed << std::setprecision(4) << b.omega_lo << ", " << b.omega_hi
        << ") mean power " << std::scientific << b.mean_power << '\n';
  }
  out << "  beyond nyquist mean power " << rs.beyond_nyquist.mean_power << '\n';
}

PoolBenchResult cmd_pool_bench(const PoolBenchOptions& opts) {
  if (opts.producers < 1 || opts.pairs < 1 || opts.batch < 1) {
    throw std::invalid_argument("producers, pairs and batch must be >= 1");
  }
  const DegradationConfig cfg = config_or_default(opts.config_path);
  validate(cfg);
  const Image hr = synthetic_texture(opts.hr_size, opts.seed);
  // The warm-up threshold is half the capacity, so keep it reachable.
  const auto capacity = static_cast<std::size_t>(
      std::max(opts.batch, std::min(opts.capacity, opts.pairs)));
  PairPool<TrainingPair> pool(capacity);
  const RandomSource master(opts.seed);

  const auto start = std::chrono::steady_clock::now();
  std::atomic<int> next = 0;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> producers;
  for (int p = 0; p < opts.producers; ++p) {
    producers.emplace_back([&] {
      try {
        for (int i = next++; i < opts.pairs; i = next++) {
          RandomSource rng = master.child(static_cast<std::uint64_t>(i));
          pool.push(synth_pair(hr, cfg, rng));
        }
      } catch (const PoolClosed&) {
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        pool.close();
      }
    });
  }
  RandomSource draw_rng = master.child(~0ULL);
  int consumed = 0;
  try {
    while (consumed < opts.pairs) {
      const auto want = static_cast<std::size_t>(std::min(opts.batch, opts.pairs - consumed));
      consumed += static_cast<int>(pool.draw_batch(std::min(want, capacity), draw_rng).size());
    }
  } catch (const PoolClosed&) {
  }
  for (auto& t : producers) t.join();
  if (failure) std::rethrow_exception(failure);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {opts.pairs, seconds, opts.pairs / seconds};
}

}  // namespace degsynth::cli
