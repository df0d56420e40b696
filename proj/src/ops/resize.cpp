#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "degsynth/ops.hpp"

namespace degsynth {

namespace {

constexpr double kCubicA = -0.75;

double keys_cubic(double x) {
  x = std::fabs(x);
  if (x <= 1.0) return ((kCubicA + 2.0) * x - (kCubicA + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((kCubicA * x - 5.0 * kCubicA) * x + 8.0 * kCubicA) * x - 4.0 * kCubicA;
  return 0.0;
}

// Source taps contributing to each output index along one axis.
struct AxisPlan {
  std::vector<std::size_t> begin{0};
  std::vector<int> index;
  std::vector<double> weight;

  void add(int i, double w) {
    index.push_back(i);
    weight.push_back(w);
  }
  void close() { begin.push_back(index.size()); }
};

AxisPlan plan_axis(int in, int out, ResizeMode mode) {
  AxisPlan plan;
  const double ratio = static_cast<double>(in) / out;
  auto clamp_index = [in](long i) { return static_cast<int>(std::clamp<long>(i, 0, in - 1)); };

  if (mode == ResizeMode::kArea && out <= in) {
    for (int d = 0; d < out; ++d) {
      const double start = d * ratio;
      const double end = (d + 1) * ratio;
      const long first = static_cast<long>(std::floor(start));
      const long last = std::min<long>(static_cast<long>(std::ceil(end)), in);
      for (long s = first; s < last; ++s) {
        const double overlap = std::min(end, static_cast<double>(s + 1)) -
                               std::max(start, static_cast<double>(s));
        if (overlap > 0.0) plan.add(static_cast<int>(s), overlap / ratio);
      }
      plan.close();
    }
    return plan;
  }

  for (int d = 0; d < out; ++d) {
    const double src = (d + 0.5) * ratio - 0.5;
    const long x0 = static_cast<long>(std::floor(src));
    const double f = src - x0;
    if (mode == ResizeMode::kBicubic) {
      plan.add(clamp_index(x0 - 1), keys_cubic(1.0 + f));
      plan.add(clamp_index(x0), keys_cubic(f));
      plan.add(clamp_index(x0 + 1), keys_cubic(1.0 - f));
      plan.add(clamp_index(x0 + 2), keys_cubic(2.0 - f));
    } else {
      plan.add(clamp_index(x0), 1.0 - f);
      plan.add(clamp_index(x0 + 1), f);
    }
    plan.close();
  }
  return plan;
}

}  // namespace

std::string_view mode_name(ResizeMode mode) {
  switch (mode) {
    case ResizeMode::kArea:
      return "area";
    case ResizeMode::kBilinear:
      return "bilinear";
    case ResizeMode::kBicubic:
      return "bicubic";
  }
  return "unknown";
}

ResizeMode parse_mode(std::string_view name) {
  for (auto m : {ResizeMode::kArea, ResizeMode::kBilinear, ResizeMode::kBicubic}) {
    if (mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown resize mode '" + std::string(name) + "'");
}

Image resize(const Image& img, int target_height, int target_width, ResizeMode mode) {
  if (target_height < 1 || target_width < 1) {
    throw std::invalid_argument("resize: target dimensions must be >= 1, got " +
                                std::to_string(target_height) + "x" + std::to_string(target_width));
  }
  const int h = img.height(), w = img.width();
  const AxisPlan cols = plan_axis(w, target_width, mode);
  const AxisPlan rows = plan_axis(h, target_height, mode);

  Image out(target_height, target_width, img.channels());
  std::vector<double> tmp(static_cast<std::size_t>(h) * target_width);
  for (int c = 0; c < img.channels(); ++c) {
    const auto src = img.plane(c);
    for (int y = 0; y < h; ++y) {
      const double* row = src.data() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < target_width; ++x) {
        double acc = 0.0;
        for (std::size_t t = cols.begin[x]; t < cols.begin[x + 1]; ++t) {
          acc += cols.weight[t] * row[cols.index[t]];
        }
        tmp[static_cast<std::size_t>(y) * target_width + x] = acc;
      }
    }
    auto dst = out.plane(c);
    for (int y = 0; y < target_height; ++y) {
      double* row_out = dst.data() + static_cast<std::size_t>(y) * target_width;
      for (std::size_t t = rows.begin[y]; t < rows.begin[y + 1]; ++t) {
        const double wt = rows.weight[t];
        const double* row_in = tmp.data() + static_cast<std::size_t>(rows.index[t]) * target_width;
        for (int x = 0; x < target_width; ++x) row_out[x] += wt * row_in[x];
      }
    }
  }
  return out;
}

}  // namespace degsynth
