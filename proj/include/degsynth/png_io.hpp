#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "degsynth/image.hpp"

namespace degsynth {

enum class PngErrorKind {
  kMissingFile,
  kUnsupportedFormat,
  kTruncated,
  kUnwritable,
};

class PngError : public std::runtime_error {
 public:
  PngError(PngErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  PngErrorKind kind() const { return kind_; }

 private:
  PngErrorKind kind_;
};

/// Reads an 8-bit grayscale or RGB PNG; samples are stored/255.
Image load_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG (gray for 1 channel, RGB for 3). Samples are clamped
/// to [0,1] and stored as round(v*255), ties away from zero.
void save_png(const Image& img, const std::filesystem::path& path);

/// The byte value save_png stores for a sample.
unsigned char quantize_sample(double v);

}  // namespace degsynth
