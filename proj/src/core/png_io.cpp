#include "degsynth/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

namespace degsynth {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; the message is kept for rethrow.
struct ErrorState {
  std::string message;
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* state = static_cast<ErrorState*>(png_get_error_ptr(png));
  if (state) state->message = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

unsigned char quantize_sample(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::round(clamped * 255.0));
}

Image load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw PngError(PngErrorKind::kMissingFile, "cannot open " + path.string());

  unsigned char signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8) {
    throw PngError(PngErrorKind::kTruncated, path.string() + ": file shorter than PNG signature");
  }
  if (png_sig_cmp(signature, 0, 8) != 0) {
    throw PngError(PngErrorKind::kUnsupportedFormat, path.string() + ": not a PNG file");
  }

  ErrorState state;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }

  // Everything written after setjmp lives on the heap so a longjmp cannot
  // leave it indeterminate.
  struct ReadState {
    int height = 0, width = 0, channels = 0;
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    std::string unsupported;
  };
  const auto read = std::make_unique<ReadState>();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw PngError(PngErrorKind::kTruncated, path.string() + ": corrupt or truncated PNG stream (" +
                                                 state.message + ")");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8) {
    read->unsupported = "bit depth " + std::to_string(bit_depth) + " (only 8-bit supported)";
  } else if (color_type == PNG_COLOR_TYPE_GRAY) {
    read->channels = 1;
  } else if (color_type == PNG_COLOR_TYPE_RGB) {
    read->channels = 3;
  } else {
    read->unsupported = "color type " + std::to_string(color_type) + " (only gray or RGB)";
  }

  if (read->unsupported.empty()) {
    read->height = static_cast<int>(png_get_image_height(png, info));
    read->width = static_cast<int>(png_get_image_width(png, info));
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(read->width) * read->channels;
    read->pixels.resize(stride * read->height);
    read->rows.resize(read->height);
    for (int y = 0; y < read->height; ++y) read->rows[y] = read->pixels.data() + y * stride;
    png_read_image(png, read->rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (!read->unsupported.empty()) {
    throw PngError(PngErrorKind::kUnsupportedFormat, path.string() + ": " + read->unsupported);
  }

  const int height = read->height, width = read->width, channels = read->channels;
  const auto& pixels = read->pixels;
  Image img(height, width, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(c, y, x) = pixels[(static_cast<std::size_t>(y) * width + x) * channels + c] / 255.0;
      }
    }
  }
  return img;
}

void save_png(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw std::invalid_argument("save_png: empty image");
  const int height = img.height(), width = img.width(), channels = img.channels();
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<unsigned char> pixels(stride * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        pixels[y * stride + static_cast<std::size_t>(x) * channels + c] =
            quantize_sample(img.at(c, y, x));
      }
    }
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw PngError(PngErrorKind::kUnwritable, "cannot write " + path.string());

  ErrorState state;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialization failed");
  }
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw PngError(PngErrorKind::kUnwritable, path.string() + ": " + state.message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(file.get()) != 0) {
    throw PngError(PngErrorKind::kUnwritable, path.string() + ": write failed");
  }
}

}  // namespace degsynth
