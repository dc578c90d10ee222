#include <png.h>

#include <fstream>
#include <iterator>

#include "svgloop/error.hpp"
#include "svgloop/raster.hpp"

namespace svgloop {

std::vector<std::uint8_t> encode_png(const Raster& raster) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  const void* data = raster.pixels().data();
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, data, 0, nullptr))
    throw Error(ErrorKind::IoFailure, std::string("png sizing failed: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr))
    throw Error(ErrorKind::IoFailure, std::string("png encode failed: ") + image.message);
  out.resize(size);
  return out;
}

Raster decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw Error(ErrorKind::IoFailure, std::string("png decode failed: ") + image.message);
  image.format = PNG_FORMAT_RGBA;
  Raster raster(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, raster.pixels().data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorKind::IoFailure, std::string("png decode failed: ") + image.message);
  }
  return raster;
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
  std::vector<std::uint8_t> bytes = encode_png(raster);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

Raster read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace svgloop
