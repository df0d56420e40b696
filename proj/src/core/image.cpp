#include "degsynth/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace degsynth {

namespace {

void check_dims(int height, int width, int channels) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(height) + "x" + std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels, got " +
                                std::to_string(channels));
  }
}

}  // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(plane_size() * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != plane_size() * channels) {
    throw std::invalid_argument("image data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(height) + "x" +
                                std::to_string(width) + "x" + std::to_string(channels));
  }
}

Image clamp_finalize(Image img) {
  for (double& v : img.samples()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

Image to_rgb(const Image& img) {
  if (img.channels() == 3) return img;
  Image out(img.height(), img.width(), 3);
  for (int c = 0; c < 3; ++c) std::ranges::copy(img.plane(0), out.plane(c).begin());
  return out;
}

}  // namespace degsynth
