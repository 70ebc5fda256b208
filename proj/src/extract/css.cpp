#include "corsica/extract/css.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

namespace corsica::extract {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f";

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(kWhitespace);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(kWhitespace);
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c) || c == '-'; }

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-') ++i;
  if (i >= s.size() || !ident_start(static_cast<unsigned char>(s[i]))) return false;
  for (++i; i < s.size(); ++i) {
    if (!ident_char(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool is_tag_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '-'; });
}

// Comments become a single space; strings are kept verbatim.
std::string strip_comments(std::string_view css) {
  std::string out;
  out.reserve(css.size());
  for (std::size_t i = 0; i < css.size();) {
    const char c = css[i];
    if (c == '"' || c == '\'') {
      auto j = i + 1;
      while (j < css.size() && css[j] != c && css[j] != '\n') j += css[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, css.size());
      out.append(css.substr(i, j - i));
      i = j;
    } else if (c == '/' && i + 1 < css.size() && css[i + 1] == '*') {
      auto end = css.find("*/", i + 2);
      out += ' ';
      i = end == std::string_view::npos ? css.size() : end + 2;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::size_t skip_string(std::string_view s, std::size_t i) {
  const char q = s[i++];
  while (i < s.size() && s[i] != q && s[i] != '\n') i += s[i] == '\\' ? 2 : 1;
  return std::min(i + 1, s.size());
}

// First of `stops` at nesting depth 0 (parens, brackets and braces nest),
// or npos.
std::size_t find_top_level(std::string_view s, std::size_t from, std::string_view stops) {
  int depth = 0;
  for (std::size_t i = from; i < s.size();) {
    const char c = s[i];
    if (c == '"' || c == '\'') {
      i = skip_string(s, i);
      continue;
    }
    if (depth == 0 && stops.find(c) != std::string_view::npos) return i;
    if (c == '(' || c == '[' || c == '{') ++depth;
    if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    ++i;
  }
  return std::string_view::npos;
}

// Index of the brace closing the one at `open`, or npos when unterminated.
std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size();) {
    const char c = s[i];
    if (c == '"' || c == '\'') {
      i = skip_string(s, i);
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return i;
    ++i;
  }
  return std::string_view::npos;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = find_top_level(s, start, std::string_view(&sep, 1));
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

struct SimpleSelector {
  SelectorKind kind;
  std::string name;

  auto operator<=>(const SimpleSelector&) const = default;
};

std::optional<SimpleSelector> parse_simple(std::string_view item) {
  if (item.size() > 1 && item[0] == '#' && is_ident(item.substr(1))) {
    return SimpleSelector{SelectorKind::id, std::string(item.substr(1))};
  }
  if (item.size() > 1 && item[0] == '.' && is_ident(item.substr(1))) {
    return SimpleSelector{SelectorKind::class_name, std::string(item.substr(1))};
  }
  if (is_tag_name(item)) return SimpleSelector{SelectorKind::type, lower(item)};
  return std::nullopt;
}

// Type/class/id tokens of the subject (rightmost) compound of a complex
// selector, e.g. "body .nav > a.btn:hover" -> {a, .btn}.
std::vector<SimpleSelector> subject_tokens(std::string_view selector) {
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < selector.size(); ++i) {
    const char c = selector[i];
    if (c == '(' || c == '[') ++depth;
    if ((c == ')' || c == ']') && depth > 0) --depth;
    if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '+' || c == '~')) {
      start = i + 1;
    }
  }
  auto compound = selector.substr(start);
  std::vector<SimpleSelector> out;
  std::size_t i = 0;
  auto read_ident = [&](std::size_t from) {
    auto j = from;
    while (j < compound.size() && (ident_char(static_cast<unsigned char>(compound[j])))) ++j;
    return j;
  };
  if (i < compound.size() && std::isalpha(static_cast<unsigned char>(compound[i]))) {
    auto j = read_ident(i);
    out.push_back({SelectorKind::type, lower(compound.substr(i, j - i))});
    i = j;
  }
  depth = 0;
  while (i < compound.size()) {
    const char c = compound[i];
    if (c == '(' || c == '[') ++depth;
    if ((c == ')' || c == ']') && depth > 0) --depth;
    if (depth == 0 && (c == '.' || c == '#')) {
      auto j = read_ident(i + 1);
      if (j > i + 1) {
        out.push_back({c == '#' ? SelectorKind::id : SelectorKind::class_name,
                       std::string(compound.substr(i + 1, j - i - 1))});
      }
      i = j;
      continue;
    }
    ++i;
  }
  return out;
}

struct Declaration {
  std::string property;
  std::string value;
  bool important = false;
};

std::vector<Declaration> parse_declarations(std::string_view body) {
  std::vector<Declaration> out;
  for (auto raw : split_top_level(body, ';')) {
    auto decl = trim(raw);
    if (decl.empty() || decl.find('{') != std::string_view::npos) continue;  // nested rule
    auto colon = decl.find(':');
    if (colon == std::string_view::npos) continue;
    auto property = lower(trim(decl.substr(0, colon)));
    auto value = trim(decl.substr(colon + 1));
    bool important = false;
    if (auto bang = value.rfind('!'); bang != std::string_view::npos &&
                                      lower(trim(value.substr(bang + 1))) == "important") {
      important = true;
      value = trim(value.substr(0, bang));
    }
    if (property.empty() || value.empty()) continue;
    out.push_back({std::move(property), std::string(value), important});
  }
  return out;
}

using DirectiveKey = std::tuple<SelectorKind, std::string, std::string>;  // selector, name, property

struct Winner {
  std::string value;
  bool important = false;
  std::size_t seq = 0;
};

class Resolver {
 public:
  explicit Resolver(Diagnostics* diag) : diag_(diag) {}

  void parse(std::string_view s, bool conditional) {
    std::size_t i = 0;
    while (i < s.size()) {
      i = s.find_first_not_of(kWhitespace, i);
      if (i == std::string_view::npos) return;
      if (s[i] == '}' || s[i] == ';') {
        ++i;
        continue;
      }
      if (s[i] == '@') {
        i = at_rule(s, i, conditional);
        continue;
      }
      auto pos = find_top_level(s, i, "{;}");
      if (pos == std::string_view::npos) {
        warn("trailing text without a block");
        return;
      }
      if (s[pos] != '{') {
        warn("selector without a block: '" + std::string(trim(s.substr(i, pos - i))) + "'");
        i = pos + 1;
        continue;
      }
      auto close = matching_brace(s, pos);
      auto body_end = close == std::string_view::npos ? s.size() : close;
      rule(trim(s.substr(i, pos - i)), s.substr(pos + 1, body_end - pos - 1), conditional);
      i = close == std::string_view::npos ? s.size() : close + 1;
    }
  }

  std::vector<CssDirective> directives() const {
    std::vector<std::pair<std::size_t, CssDirective>> out;
    for (const auto& [key, win] : winners_) {
      if (tainted_.count(key)) continue;
      const auto& [kind, name, property] = key;
      auto value = canonical_css_value(property, win.value);
      if (!value) continue;
      out.emplace_back(win.seq, CssDirective{kind, name, kind == SelectorKind::type ? name : "div",
                                             property, std::move(*value)});
    }
    auto group = [](SelectorKind k) {
      return k == SelectorKind::id ? 0 : k == SelectorKind::class_name ? 1 : 2;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      return std::pair(group(a.second.selector_kind), a.first) <
             std::pair(group(b.second.selector_kind), b.first);
    });
    std::vector<CssDirective> result;
    result.reserve(out.size());
    for (auto& [seq, d] : out) result.push_back(std::move(d));
    return result;
  }

 private:
  std::size_t at_rule(std::string_view s, std::size_t at, bool conditional) {
    auto j = at + 1;
    while (j < s.size() && ident_char(static_cast<unsigned char>(s[j]))) ++j;
    const auto name = lower(s.substr(at + 1, j - at - 1));
    auto pos = find_top_level(s, j, "{;");
    if (pos == std::string_view::npos) return s.size();
    if (s[pos] == ';') return pos + 1;
    auto close = matching_brace(s, pos);
    auto body_end = close == std::string_view::npos ? s.size() : close;
    static const std::set<std::string> kConditional{"media", "supports", "document", "-moz-document",
                                                    "layer", "container", "scope"};
    if (kConditional.count(name)) {
      // Rules here may or may not apply to a probe; they only invalidate.
      parse(s.substr(pos + 1, body_end - pos - 1), true);
    }
    (void)conditional;
    return close == std::string_view::npos ? s.size() : close + 1;
  }

  void rule(std::string_view prelude, std::string_view body, bool conditional) {
    if (prelude.empty()) {
      warn("rule without selector");
      return;
    }
    auto decls = parse_declarations(body);
    for (auto item_raw : split_top_level(prelude, ',')) {
      auto item = trim(item_raw);
      auto simple = parse_simple(item);
      if (simple && !conditional) {
        for (const auto& d : decls) {
          if (!is_whitelisted_property(d.property)) continue;
          DirectiveKey key{simple->kind, simple->name, d.property};
          auto& win = winners_[key];
          const auto seq = ++seq_;
          if (win.seq == 0 || d.important || !win.important) win = {d.value, d.important, seq};
        }
        continue;
      }
      auto tokens = simple ? std::vector<SimpleSelector>{*simple} : subject_tokens(item);
      for (const auto& tok : tokens) {
        for (const auto& d : decls) {
          if (is_whitelisted_property(d.property)) tainted_.insert({tok.kind, tok.name, d.property});
        }
      }
    }
  }

  void warn(std::string msg) {
    if (diag_) diag_->warnings.push_back("css: " + std::move(msg));
  }

  Diagnostics* diag_;
  std::map<DirectiveKey, Winner> winners_;
  std::set<DirectiveKey> tainted_;
  std::size_t seq_ = 0;
};

}  // namespace

std::vector<CssDirective> resolve_css_directives(std::string_view css, Diagnostics* diag) {
  Resolver resolver(diag);
  resolver.parse(strip_comments(css), false);
  return resolver.directives();
}

std::optional<Feature> extract_css_features(std::string_view path, std::string_view bytes,
                                            const ExtractOptions& options, Diagnostics* diag) {
  Diagnostics local;
  auto directives = resolve_css_directives(bytes, diag ? &local : nullptr);
  if (diag) {
    for (auto& w : local.warnings) diag->warnings.push_back(std::string(path) + ": " + std::move(w));
  }
  if (directives.empty()) return std::nullopt;
  if (directives.size() > options.max_subfeatures) directives.resize(options.max_subfeatures);
  std::vector<Subfeature> subs(directives.begin(), directives.end());
  return make_feature(std::string(path), FileType::css, std::move(subs));
}

}  // namespace corsica::extract
