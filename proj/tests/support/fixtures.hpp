#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "degsynth/image.hpp"
#include "degsynth/random.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return DEGSYNTH_TEST_DATA_DIR; }

inline std::filesystem::path natural_image_path() { return data_dir() / "natural_128.png"; }

inline std::vector<std::filesystem::path> corpus_paths() {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir() / "corpus")) {
    if (entry.path().extension() == ".png") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

inline degsynth::Image random_image(int h, int w, int c, degsynth::RandomSource& rng) {
  degsynth::Image img(h, w, c);
  for (double& v : img.samples()) v = rng.uniform();
  return img;
}

inline degsynth::Image constant_image(int h, int w, int c, double v) {
  return degsynth::Image(h, w, c, v);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const degsynth::Image& a, const degsynth::Image& b) {
  double m = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) m = std::max(m, std::abs(sa[i] - sb[i]));
  return m;
}

// Scratch directory removed when the object goes out of scope.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("degsynth_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
