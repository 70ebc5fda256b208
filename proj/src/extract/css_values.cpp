#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "corsica/extract/css.hpp"
#include "numbers.hpp"

namespace corsica::extract {

namespace {

using detail::parse_decimal;
using detail::shortest;
using detail::trimmed_fixed;

struct Rgba {
  int r = 0, g = 0, b = 0;
  int alpha = 255;  // 8-bit, as engines store it
};

const std::unordered_map<std::string_view, std::uint32_t>& named_colors() {
  static const std::unordered_map<std::string_view, std::uint32_t> kColors{
      {"aliceblue", 0xf0f8ff}, {"antiquewhite", 0xfaebd7}, {"aqua", 0x00ffff},
      {"aquamarine", 0x7fffd4}, {"azure", 0xf0ffff}, {"beige", 0xf5f5dc},
      {"bisque", 0xffe4c4}, {"black", 0x000000}, {"blanchedalmond", 0xffebcd},
      {"blue", 0x0000ff}, {"blueviolet", 0x8a2be2}, {"brown", 0xa52a2a},
      {"burlywood", 0xdeb887}, {"cadetblue", 0x5f9ea0}, {"chartreuse", 0x7fff00},
      {"chocolate", 0xd2691e}, {"coral", 0xff7f50}, {"cornflowerblue", 0x6495ed},
      {"cornsilk", 0xfff8dc}, {"crimson", 0xdc143c}, {"cyan", 0x00ffff},
      {"darkblue", 0x00008b}, {"darkcyan", 0x008b8b}, {"darkgoldenrod", 0xb8860b},
      {"darkgray", 0xa9a9a9}, {"darkgreen", 0x006400}, {"darkgrey", 0xa9a9a9},
      {"darkkhaki", 0xbdb76b}, {"darkmagenta", 0x8b008b}, {"darkolivegreen", 0x556b2f},
      {"darkorange", 0xff8c00}, {"darkorchid", 0x9932cc}, {"darkred", 0x8b0000},
      {"darksalmon", 0xe9967a}, {"darkseagreen", 0x8fbc8f}, {"darkslateblue", 0x483d8b},
      {"darkslategray", 0x2f4f4f}, {"darkslategrey", 0x2f4f4f}, {"darkturquoise", 0x00ced1},
      {"darkviolet", 0x9400d3}, {"deeppink", 0xff1493}, {"deepskyblue", 0x00bfff},
      {"dimgray", 0x696969}, {"dimgrey", 0x696969}, {"dodgerblue", 0x1e90ff},
      {"firebrick", 0xb22222}, {"floralwhite", 0xfffaf0}, {"forestgreen", 0x228b22},
      {"fuchsia", 0xff00ff}, {"gainsboro", 0xdcdcdc}, {"ghostwhite", 0xf8f8ff},
      {"gold", 0xffd700}, {"goldenrod", 0xdaa520}, {"gray", 0x808080},
      {"green", 0x008000}, {"greenyellow", 0xadff2f}, {"grey", 0x808080},
      {"honeydew", 0xf0fff0}, {"hotpink", 0xff69b4}, {"indianred", 0xcd5c5c},
      {"indigo", 0x4b0082}, {"ivory", 0xfffff0}, {"khaki", 0xf0e68c},
      {"lavender", 0xe6e6fa}, {"lavenderblush", 0xfff0f5}, {"lawngreen", 0x7cfc00},
      {"lemonchiffon", 0xfffacd}, {"lightblue", 0xadd8e6}, {"lightcoral", 0xf08080},
      {"lightcyan", 0xe0ffff}, {"lightgoldenrodyellow", 0xfafad2}, {"lightgray", 0xd3d3d3},
      {"lightgreen", 0x90ee90}, {"lightgrey", 0xd3d3d3}, {"lightpink", 0xffb6c1},
      {"lightsalmon", 0xffa07a}, {"lightseagreen", 0x20b2aa}, {"lightskyblue", 0x87cefa},
      {"lightslategray", 0x778899}, {"lightslategrey", 0x778899}, {"lightsteelblue", 0xb0c4de},
      {"lightyellow", 0xffffe0}, {"lime", 0x00ff00}, {"limegreen", 0x32cd32},
      {"linen", 0xfaf0e6}, {"magenta", 0xff00ff}, {"maroon", 0x800000},
      {"mediumaquamarine", 0x66cdaa}, {"mediumblue", 0x0000cd}, {"mediumorchid", 0xba55d3},
      {"mediumpurple", 0x9370db}, {"mediumseagreen", 0x3cb371}, {"mediumslateblue", 0x7b68ee},
      {"mediumspringgreen", 0x00fa9a}, {"mediumturquoise", 0x48d1cc}, {"mediumvioletred", 0xc71585},
      {"midnightblue", 0x191970}, {"mintcream", 0xf5fffa}, {"mistyrose", 0xffe4e1},
      {"moccasin", 0xffe4b5}, {"navajowhite", 0xffdead}, {"navy", 0x000080},
      {"oldlace", 0xfdf5e6}, {"olive", 0x808000}, {"olivedrab", 0x6b8e23},
      {"orange", 0xffa500}, {"orangered", 0xff4500}, {"orchid", 0xda70d6},
      {"palegoldenrod", 0xeee8aa}, {"palegreen", 0x98fb98}, {"paleturquoise", 0xafeeee},
      {"palevioletred", 0xdb7093}, {"papayawhip", 0xffefd5}, {"peachpuff", 0xffdab9},
      {"peru", 0xcd853f}, {"pink", 0xffc0cb}, {"plum", 0xdda0dd},
      {"powderblue", 0xb0e0e6}, {"purple", 0x800080}, {"rebeccapurple", 0x663399},
      {"red", 0xff0000}, {"rosybrown", 0xbc8f8f}, {"royalblue", 0x4169e1},
      {"saddlebrown", 0x8b4513}, {"salmon", 0xfa8072}, {"sandybrown", 0xf4a460},
      {"seagreen", 0x2e8b57}, {"seashell", 0xfff5ee}, {"sienna", 0xa0522d},
      {"silver", 0xc0c0c0}, {"skyblue", 0x87ceeb}, {"slateblue", 0x6a5acd},
      {"slategray", 0x708090}, {"slategrey", 0x708090}, {"snow", 0xfffafa},
      {"springgreen", 0x00ff7f}, {"steelblue", 0x4682b4}, {"tan", 0xd2b48c},
      {"teal", 0x008080}, {"thistle", 0xd8bfd8}, {"tomato", 0xff6347},
      {"turquoise", 0x40e0d0}, {"violet", 0xee82ee}, {"wheat", 0xf5deb3},
      {"white", 0xffffff}, {"whitesmoke", 0xf5f5f5}, {"yellow", 0xffff00},
      {"yellowgreen", 0x9acd32}};
  return kColors;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int clamp_channel(double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); }

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::optional<Rgba> parse_hex(std::string_view hex) {
  for (char c : hex) {
    if (hex_digit(c) < 0) return std::nullopt;
  }
  auto nib = [&](std::size_t i) { return hex_digit(hex[i]); };
  auto byte = [&](std::size_t i) { return nib(i) * 16 + nib(i + 1); };
  switch (hex.size()) {
    case 3: return Rgba{nib(0) * 17, nib(1) * 17, nib(2) * 17, 255};
    case 4: return Rgba{nib(0) * 17, nib(1) * 17, nib(2) * 17, nib(3) * 17};
    case 6: return Rgba{byte(0), byte(2), byte(4), 255};
    case 8: return Rgba{byte(0), byte(2), byte(4), byte(6)};
    default: return std::nullopt;
  }
}

// rgb()/rgba() arguments in comma or space syntax, with an optional
// "/ alpha" in the latter.
std::optional<Rgba> parse_rgb_function(std::string_view args) {
  std::vector<std::string> parts;
  std::string current;
  bool slash_seen = false;
  const bool commas = args.find(',') != std::string_view::npos;
  for (char c : args) {
    const bool sep = commas ? c == ',' : (std::isspace(static_cast<unsigned char>(c)) || c == '/');
    if (c == '/') {
      if (commas || slash_seen) return std::nullopt;
      slash_seen = true;
    }
    if (sep) {
      if (!trim(current).empty()) parts.emplace_back(trim(current));
      else if (commas) return std::nullopt;
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty()) parts.emplace_back(trim(current));
  if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
  if (!commas && parts.size() == 4 && !slash_seen) return std::nullopt;

  Rgba out;
  int* channels[3] = {&out.r, &out.g, &out.b};
  const bool percent = parts[0].back() == '%';
  for (int i = 0; i < 3; ++i) {
    std::string_view p = parts[static_cast<std::size_t>(i)];
    if ((p.back() == '%') != percent) return std::nullopt;
    if (percent) p.remove_suffix(1);
    auto v = parse_decimal(p);
    if (!v) return std::nullopt;
    *channels[i] = clamp_channel(percent ? *v * 2.55 : *v);
  }
  if (parts.size() == 4) {
    std::string_view a = parts[3];
    const bool pct = a.back() == '%';
    if (pct) a.remove_suffix(1);
    auto v = parse_decimal(a);
    if (!v) return std::nullopt;
    out.alpha = clamp_channel(std::clamp(pct ? *v / 100 : *v, 0.0, 1.0) * 255);
  }
  return out;
}

std::optional<Rgba> parse_color(std::string_view raw) {
  auto v = lower(trim(raw));
  if (v.empty()) return std::nullopt;
  if (v.front() == '#') return parse_hex(std::string_view(v).substr(1));
  if (v == "transparent") return Rgba{0, 0, 0, 0};
  const auto& names = named_colors();
  if (auto it = names.find(v); it != names.end()) {
    return Rgba{static_cast<int>(it->second >> 16), static_cast<int>((it->second >> 8) & 0xff),
                static_cast<int>(it->second & 0xff), 255};
  }
  for (std::string_view fn : {"rgba(", "rgb("}) {
    if (v.rfind(fn, 0) == 0 && v.back() == ')') {
      return parse_rgb_function(std::string_view(v).substr(fn.size(), v.size() - fn.size() - 1));
    }
  }
  return std::nullopt;
}

// Two decimals when they round-trip through 8 bits, else three.
std::string format_alpha(int alpha8) {
  const double a = alpha8 / 255.0;
  const double two = std::round(a * 100) / 100;
  if (std::lround(two * 255) == alpha8) return trimmed_fixed(two, 2);
  return trimmed_fixed(std::round(a * 1000) / 1000, 3);
}

std::string format_color(const Rgba& c) {
  auto rgb = std::to_string(c.r) + ", " + std::to_string(c.g) + ", " + std::to_string(c.b);
  if (c.alpha == 255) return "rgb(" + rgb + ")";
  return "rgba(" + rgb + ", " + format_alpha(c.alpha) + ")";
}

enum class Sign { any, non_negative };

std::optional<std::string> canonical_px(std::string_view raw, Sign sign) {
  auto v = lower(trim(raw));
  std::optional<double> n;
  if (v == "0" || v == "+0" || v == "-0") {
    n = 0.0;
  } else if (v.size() > 2 && v.compare(v.size() - 2, 2, "px") == 0) {
    n = parse_decimal(std::string_view(v).substr(0, v.size() - 2));
  }
  if (!n || (sign == Sign::non_negative && *n < 0)) return std::nullopt;
  return shortest(*n) + "px";
}

const std::unordered_map<std::string_view, std::unordered_set<std::string_view>>& keyword_sets() {
  static const std::unordered_map<std::string_view, std::unordered_set<std::string_view>> kSets{
      {"display",
       {"inline", "block", "inline-block", "flex", "inline-flex", "grid", "inline-grid", "none",
        "table", "inline-table", "table-row", "table-cell", "table-column", "table-caption",
        "table-row-group", "table-header-group", "table-footer-group", "table-column-group",
        "list-item", "contents", "flow-root"}},
      {"position", {"static", "relative", "absolute", "fixed", "sticky"}},
      {"float", {"left", "right", "none", "inline-start", "inline-end"}},
      {"text-align", {"left", "right", "center", "justify", "start", "end", "match-parent"}},
  };
  return kSets;
}

}  // namespace

bool is_whitelisted_property(std::string_view property) {
  static const std::unordered_set<std::string_view> kWhitelist{
      "color",       "background-color", "margin-top", "margin-left",      "padding-top",
      "padding-left", "width",           "height",     "font-size",        "display",
      "position",    "float",            "border-top-width", "text-align", "line-height",
      "opacity",     "z-index"};
  return kWhitelist.count(property) != 0;
}

std::optional<std::string> canonical_css_value(std::string_view property, std::string_view value) {
  if (!is_whitelisted_property(property)) return std::nullopt;
  if (property == "color" || property == "background-color") {
    auto c = parse_color(value);
    if (!c) return std::nullopt;
    return format_color(*c);
  }
  if (property == "margin-top" || property == "margin-left") return canonical_px(value, Sign::any);
  if (property == "padding-top" || property == "padding-left" || property == "width" ||
      property == "height" || property == "font-size" || property == "border-top-width") {
    return canonical_px(value, Sign::non_negative);
  }
  if (property == "line-height") {
    if (lower(trim(value)) == "normal") return std::string("normal");
    return canonical_px(value, Sign::non_negative);
  }
  if (property == "opacity") {
    auto v = lower(trim(value));
    const bool pct = !v.empty() && v.back() == '%';
    auto n = parse_decimal(pct ? std::string_view(v).substr(0, v.size() - 1) : std::string_view(v));
    if (!n) return std::nullopt;
    return shortest(std::clamp(pct ? *n / 100 : *n, 0.0, 1.0));
  }
  if (property == "z-index") {
    auto v = lower(trim(value));
    if (v == "auto") return v;
    auto n = parse_decimal(v);
    if (!n || *n != std::floor(*n) || v.find_first_of(".e") != std::string::npos) return std::nullopt;
    return shortest(*n);
  }
  const auto& sets = keyword_sets();
  auto it = sets.find(property);
  auto v = lower(trim(value));
  if (it == sets.end() || !it->second.count(v)) return std::nullopt;
  return v;
}

}  // namespace corsica::extract
