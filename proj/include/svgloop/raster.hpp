#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "svgloop/svg.hpp"

namespace svgloop {

inline constexpr int kCanvasSize = 224;

// Row-major RGBA, 8 bits per channel, not premultiplied.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgba background = {255, 255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  std::uint8_t* pixel(int x, int y) { return &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 4]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 4];
  }

  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Paints all elements in order onto an opaque white canvas. The document's
// viewBox is fitted into the canvas (uniform scale, centered).
Raster render(const SvgDocument& doc, int width = kCanvasSize, int height = kCanvasSize);

// Paints `elements` over an existing canvas using `frame`'s viewBox. Rendering
// a document equals painting its elements one call at a time, byte for byte.
void paint_elements(Raster& canvas, const SvgDocument& frame, std::span<const PathElement> elements);

// Mean absolute RGB difference normalized to [0,1].
double pixel_diff(const Raster& a, const Raster& b);
// Mean squared RGB difference on [0,1]-normalized channels.
double mse(const Raster& a, const Raster& b);
// Mean SSIM over luma, 11x11 Gaussian window with sigma 1.5.
double ssim(const Raster& a, const Raster& b);

std::vector<std::uint8_t> encode_png(const Raster& raster);
Raster decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path& path, const Raster& raster);
Raster read_png(const std::filesystem::path& path);

}  // namespace svgloop
