#include "images.hpp"

#include <png.h>
#include <stdio.h>

#include <jpeglib.h>
#include <stdexcept>
#include <vector>

namespace corsica::testkit {

std::string encode_png(std::uint32_t width, std::uint32_t height, std::uint8_t shade) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = width;
  image.height = height;
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3, shade);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw std::runtime_error("png size query failed");
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw std::runtime_error(std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::string encode_jpeg(std::uint32_t width, std::uint32_t height, std::uint8_t shade) {
  jpeg_compress_struct cinfo{};
  jpeg_error_mgr jerr{};
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = width;
  cinfo.image_height = height;
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 50, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 3, shade);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW rows[1] = {row.data()};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::string out(reinterpret_cast<char*>(buffer), size);
  jpeg_destroy_compress(&cinfo);
  free(buffer);
  return out;
}

// GIF89a with a 2-entry palette. Pixels are LZW-coded with a clear code
// before every pair so codes stay 3 bits wide: no compression, but valid.
std::string encode_gif(std::uint32_t width, std::uint32_t height, std::uint8_t shade) {
  if (width > 0xFFFF || height > 0xFFFF) throw std::invalid_argument("gif size out of range");
  std::string out = "GIF89a";
  auto u16 = [&](std::uint32_t v) {
    out += static_cast<char>(v & 0xFF);
    out += static_cast<char>((v >> 8) & 0xFF);
  };
  u16(width);
  u16(height);
  out += static_cast<char>(0x80);  // global table, 2 entries
  out += '\0';
  out += '\0';
  out += std::string{static_cast<char>(shade), static_cast<char>(shade), static_cast<char>(shade)};
  out += std::string(3, '\xFF');
  out += ',';
  u16(0);
  u16(0);
  u16(width);
  u16(height);
  out += '\0';
  out += static_cast<char>(2);  // LZW minimum code size

  constexpr std::uint32_t kClear = 4, kEnd = 5;
  std::string data;
  std::uint32_t acc = 0;
  int bits = 0;
  auto put = [&](std::uint32_t code) {
    acc |= code << bits;
    bits += 3;
    while (bits >= 8) {
      data += static_cast<char>(acc & 0xFF);
      acc >>= 8;
      bits -= 8;
    }
  };
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  for (std::uint64_t i = 0; i < pixels; ++i) {
    if (i % 2 == 0) put(kClear);
    put(0);
  }
  put(kEnd);
  if (bits > 0) data += static_cast<char>(acc & 0xFF);
  for (std::size_t i = 0; i < data.size(); i += 255) {
    const auto n = std::min<std::size_t>(255, data.size() - i);
    out += static_cast<char>(n);
    out.append(data, i, n);
  }
  out += '\0';
  out += ';';
  return out;
}

std::string encode_image(extract::ImageFormat format, std::uint32_t width, std::uint32_t height, std::uint8_t shade) {
  switch (format) {
    case extract::ImageFormat::png: return encode_png(width, height, shade);
    case extract::ImageFormat::gif: return encode_gif(width, height, shade);
    case extract::ImageFormat::jpeg: return encode_jpeg(width, height, shade);
  }
  return {};
}

}  // namespace corsica::testkit
