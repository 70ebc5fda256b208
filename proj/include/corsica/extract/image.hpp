#pragma once

#include <optional>
#include <string_view>

#include "corsica/extract/feature.hpp"

namespace corsica::extract {

enum class ImageFormat { png, gif, jpeg };

struct ImageHeader {
  ImageFormat format;
  ImageDimension size;
};

/// Reads the size from a PNG IHDR, GIF logical screen descriptor or JPEG
/// SOFn segment, detected by magic bytes. Nothing for other formats
/// (SVG included), truncated headers, or zero sizes.
std::optional<ImageHeader> parse_image_header(std::string_view bytes);

std::optional<Feature> extract_image_feature(std::string_view path, std::string_view bytes,
                                             Diagnostics* diag = nullptr);

}  // namespace corsica::extract
