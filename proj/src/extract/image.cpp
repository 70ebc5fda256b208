#include "corsica/extract/image.hpp"

#include <cstdint>
#include <string>

namespace corsica::extract {

namespace {

std::uint32_t be16(std::string_view b, std::size_t at) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) << 8) |
         static_cast<unsigned char>(b[at + 1]);
}

std::uint32_t be32(std::string_view b, std::size_t at) { return (be16(b, at) << 16) | be16(b, at + 2); }

std::uint32_t le16(std::string_view b, std::size_t at) {
  return static_cast<unsigned char>(b[at]) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8);
}

std::optional<ImageDimension> png_size(std::string_view b) {
  // signature(8) length(4) "IHDR"(4) width(4) height(4)
  if (b.size() < 24 || b.substr(12, 4) != "IHDR") return std::nullopt;
  return ImageDimension{be32(b, 16), be32(b, 20)};
}

std::optional<ImageDimension> gif_size(std::string_view b) {
  if (b.size() < 10) return std::nullopt;
  return ImageDimension{le16(b, 6), le16(b, 8)};
}

bool is_sof(unsigned char marker) {
  // C0-CF except DHT (C4), JPG (C8) and DAC (CC).
  return marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
}

std::optional<ImageDimension> jpeg_size(std::string_view b) {
  std::size_t i = 2;
  while (i < b.size()) {
    if (static_cast<unsigned char>(b[i]) != 0xFF) return std::nullopt;
    while (i < b.size() && static_cast<unsigned char>(b[i]) == 0xFF) ++i;  // fill bytes
    if (i >= b.size()) return std::nullopt;
    const auto marker = static_cast<unsigned char>(b[i++]);
    if (marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) continue;  // no payload
    if (marker == 0xD9 || marker == 0xDA) return std::nullopt;           // EOI / SOS before SOF
    if (i + 2 > b.size()) return std::nullopt;
    const auto length = be16(b, i);
    if (length < 2) return std::nullopt;
    if (is_sof(marker)) {
      // length(2) precision(1) height(2) width(2)
      if (length < 7 || i + 7 > b.size()) return std::nullopt;
      return ImageDimension{be16(b, i + 5), be16(b, i + 3)};
    }
    i += length;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ImageHeader> parse_image_header(std::string_view b) {
  std::optional<ImageDimension> size;
  ImageFormat format{};
  if (b.size() >= 8 && b.substr(0, 8) == std::string_view("\x89PNG\r\n\x1a\n", 8)) {
    format = ImageFormat::png;
    size = png_size(b);
  } else if (b.size() >= 6 && (b.substr(0, 6) == "GIF87a" || b.substr(0, 6) == "GIF89a")) {
    format = ImageFormat::gif;
    size = gif_size(b);
  } else if (b.size() >= 3 && static_cast<unsigned char>(b[0]) == 0xFF &&
             static_cast<unsigned char>(b[1]) == 0xD8 && static_cast<unsigned char>(b[2]) == 0xFF) {
    format = ImageFormat::jpeg;
    size = jpeg_size(b);
  }
  if (!size || size->width == 0 || size->height == 0) return std::nullopt;
  return ImageHeader{format, *size};
}

std::optional<Feature> extract_image_feature(std::string_view path, std::string_view bytes,
                                             Diagnostics* diag) {
  auto header = parse_image_header(bytes);
  if (!header) {
    if (diag && corpus::extension_of(path) != "svg") {
      diag->warnings.push_back(std::string(path) + ": no readable image header");
    }
    return std::nullopt;
  }
  return make_feature(std::string(path), FileType::image, {header->size});
}

}  // namespace corsica::extract
