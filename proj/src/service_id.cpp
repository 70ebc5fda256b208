#include "corsica/service_id.hpp"

#include <cctype>
#include <charconv>

#include "corsica/error.hpp"

namespace corsica {

namespace {

bool is_suffix_char(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '+' || c == '~';
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::optional<Version> Version::parse(std::string_view text) {
  Version v;
  std::size_t i = 0;
  while (true) {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc{}) return std::nullopt;
    v.segments.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
    if (v.segments.size() > 4) return std::nullopt;
    // A '.' followed by a digit continues the numeric part; anything else is suffix.
    if (i + 1 < text.size() && text[i] == '.' &&
        std::isdigit(static_cast<unsigned char>(text[i + 1])) && v.segments.size() < 4) {
      ++i;
      continue;
    }
    break;
  }
  if (i < text.size()) {
    if (text[i] == '.' && i + 1 == text.size()) return std::nullopt;
    // A fifth numeric segment is not a suffix.
    if (text[i] == '.' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) return std::nullopt;
    for (std::size_t j = i; j < text.size(); ++j) {
      if (!is_suffix_char(static_cast<unsigned char>(text[j]))) return std::nullopt;
    }
    v.suffix = std::string(text.substr(i));
  }
  return v;
}

std::string Version::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(segments[i]);
  }
  return out + suffix;
}

std::strong_ordering compare_versions(const Version& a, const Version& b) {
  const auto n = std::max(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = i < a.segments.size() ? a.segments[i] : 0;
    const auto y = i < b.segments.size() ? b.segments[i] : 0;
    if (x != y) return x <=> y;
  }
  return a.suffix.compare(b.suffix) <=> 0;
}

bool operator==(const Version& a, const Version& b) { return compare_versions(a, b) == 0; }

ServiceId ServiceId::parse(std::string_view spec) {
  auto parts = split(spec, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    throw DataError("service id must be vendor:product:version[:component], got '" +
                    std::string(spec) + "'");
  }
  ServiceId id{parts[0], parts[1], parts[2], parts.size() == 4 ? parts[3] : std::string{}};
  validate(id);
  return id;
}

std::string ServiceId::str() const {
  std::string out = vendor + ':' + product + ':' + version;
  if (!component.empty()) out += ':' + component;
  return out;
}

std::string ServiceId::slug() const {
  static constexpr char kHex[] = "0123456789abcdef";
  auto encode = [](const std::string& field) {
    std::string out;
    for (unsigned char c : field) {
      if (std::isalnum(c) || c == '.' || c == '-') {
        out += static_cast<char>(c);
      } else {
        out += '~';
        out += kHex[c >> 4];
        out += kHex[c & 0xf];
      }
    }
    return out;
  };
  std::string out = encode(vendor) + '_' + encode(product) + '_' + encode(version);
  if (!component.empty()) out += '_' + encode(component);
  return out;
}

void validate(const ServiceId& id) {
  if (id.vendor.empty() || id.product.empty()) {
    throw DataError("service id needs a vendor and a product: '" + id.str() + "'");
  }
  for (const auto* field : {&id.vendor, &id.product, &id.version, &id.component}) {
    if (field->find(':') != std::string::npos) {
      throw DataError("service id fields may not contain ':': '" + *field + "'");
    }
  }
  if (!id.version.empty() && !Version::parse(id.version)) {
    throw DataError("unparseable version '" + id.version + "' in " + id.str());
  }
}

}  // namespace corsica
