#include "corsica/extract/js.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include "corsica/hash.hpp"
#include "numbers.hpp"

namespace corsica::extract {

namespace {

enum class Tok { ident, number, string, tmpl, regex, punct };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool newline_before = false;
  bool substitutions = false;  // templates only
};

struct LexError {
  std::size_t offset;
  std::string reason;
};

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

const std::set<std::string_view>& regex_after_keywords() {
  static const std::set<std::string_view> k{"return", "typeof", "instanceof", "in",   "of",
                                            "new",    "delete", "void",       "throw", "case",
                                            "do",     "else",   "yield",      "await"};
  return k;
}

// Longest first.
constexpr std::string_view kPunctuators[] = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??", "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "**",  "<<",  ">>"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  std::vector<Token> run() {
    while (true) {
      skip_trivia();
      if (i_ >= s_.size()) break;
      const auto start = i_;
      const unsigned char c = s_[i_];
      if (c == '`') {
        ++i_;
        template_body(start);
      } else if (c == '"' || c == '\'') {
        string_literal();
        push(Tok::string, start);
      } else if (std::isdigit(c) || (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        number();
        push(Tok::number, start);
      } else if (ident_char(c)) {
        while (i_ < s_.size() && ident_char(static_cast<unsigned char>(s_[i_]))) ++i_;
        push(Tok::ident, start);
      } else if (c == '/' && regex_allowed()) {
        regex();
        push(Tok::regex, start);
      } else if (c == '\\') {
        throw LexError{i_, "escape outside literal"};
      } else {
        punct(start);
      }
    }
    if (!stack_.empty()) throw LexError{s_.size(), "unclosed bracket or template"};
    return std::move(out_);
  }

 private:
  void skip_trivia() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '\n' || c == '\r') {
        newline_ = true;
        ++i_;
      } else if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
        ++i_;
      } else if (s_.substr(i_, 3) == "\xEF\xBB\xBF" || s_.substr(i_, 2) == "\xC2\xA0") {
        i_ += s_[i_] == '\xEF' ? 3 : 2;
      } else if (s_.substr(i_, 2) == "//") {
        while (i_ < s_.size() && s_[i_] != '\n' && s_[i_] != '\r') ++i_;
      } else if (s_.substr(i_, 2) == "/*") {
        auto end = s_.find("*/", i_ + 2);
        if (end == std::string_view::npos) throw LexError{i_, "unterminated comment"};
        if (s_.substr(i_, end - i_).find_first_of("\r\n") != std::string_view::npos) newline_ = true;
        i_ = end + 2;
      } else {
        return;
      }
    }
  }

  void push(Tok kind, std::size_t start, bool substitutions = false) {
    prev_kind_ = kind;
    prev_text_ = s_.substr(start, i_ - start);
    has_prev_ = true;
    if (suppressed() == 0) {
      out_.push_back({kind, prev_text_, start, i_, newline_, substitutions});
      newline_ = false;
    }
  }

  std::size_t suppressed() const { return static_cast<std::size_t>(std::count(stack_.begin(), stack_.end(), '$')); }

  bool regex_allowed() const {
    if (!has_prev_) return true;
    switch (prev_kind_) {
      case Tok::ident: return regex_after_keywords().count(prev_text_) > 0;
      case Tok::number:
      case Tok::string:
      case Tok::tmpl:
      case Tok::regex: return false;
      case Tok::punct: return prev_text_ != ")" && prev_text_ != "]" && prev_text_ != "++" && prev_text_ != "--";
    }
    return true;
  }

  void string_literal() {
    const char q = s_[i_++];
    while (i_ < s_.size() && s_[i_] != q) {
      if (s_[i_] == '\n' || s_[i_] == '\r') throw LexError{i_, "newline in string"};
      if (s_[i_] == '\\' && s_.compare(i_ + 1, 2, "\r\n") == 0) {
        i_ += 3;
      } else {
        i_ += s_[i_] == '\\' ? 2 : 1;
      }
    }
    if (i_ >= s_.size()) throw LexError{i_, "unterminated string"};
    ++i_;
  }

  void number() {
    const bool radix = s_[i_] == '0' && i_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_ + 1]));
    while (i_ < s_.size()) {
      const unsigned char c = s_[i_];
      if (std::isalnum(c) || c == '_' || c == '.') {
        ++i_;
      } else if ((c == '+' || c == '-') && !radix && (s_[i_ - 1] == 'e' || s_[i_ - 1] == 'E')) {
        ++i_;
      } else {
        break;
      }
    }
  }

  void regex() {
    const auto start = i_++;
    bool in_class = false;
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n' || s_[i_] == '\r') throw LexError{start, "unterminated regex"};
      const char c = s_[i_];
      if (c == '\\') {
        i_ += 2;
        continue;
      }
      ++i_;
      if (c == '[') in_class = true;
      else if (c == ']') in_class = false;
      else if (c == '/' && !in_class) break;
    }
    while (i_ < s_.size() && ident_char(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  // Scans template characters after '`' or after the '}' closing a
  // substitution. `start` is where the outermost enclosing template began.
  void template_body(std::size_t start) {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '\\') {
        i_ += 2;
      } else if (c == '`') {
        ++i_;
        if (suppressed() == 0) {
          const bool subst = template_has_subst_;
          template_has_subst_ = false;
          push(Tok::tmpl, start, subst);
        } else {
          push(Tok::tmpl, start);
        }
        return;
      } else if (c == '$' && i_ + 1 < s_.size() && s_[i_ + 1] == '{') {
        i_ += 2;
        if (suppressed() == 0) {
          template_has_subst_ = true;
          template_start_ = start;
        }
        stack_.push_back('$');
        has_prev_ = false;  // an expression starts
        return;
      } else {
        ++i_;
      }
    }
    throw LexError{start, "unterminated template"};
  }

  void punct(std::size_t start) {
    const char c = s_[i_];
    if (c == '(' || c == '[' || c == '{') {
      stack_.push_back(c);
      ++i_;
      push(Tok::punct, start);
      return;
    }
    if (c == ')' || c == ']' || c == '}') {
      if (stack_.empty()) throw LexError{i_, "unbalanced closing bracket"};
      const char open = stack_.back();
      if (c == '}' && open == '$') {
        stack_.pop_back();
        ++i_;
        template_body(suppressed() == 0 ? template_start_ : start);
        return;
      }
      if ((c == ')' && open != '(') || (c == ']' && open != '[') || (c == '}' && open != '{')) {
        throw LexError{i_, "mismatched bracket"};
      }
      stack_.pop_back();
      ++i_;
      push(Tok::punct, start);
      return;
    }
    for (auto p : kPunctuators) {
      if (s_.substr(i_, p.size()) == p) {
        i_ += p.size();
        push(Tok::punct, start);
        return;
      }
    }
    ++i_;
    push(Tok::punct, start);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<Token> out_;
  std::vector<char> stack_;
  bool newline_ = false;
  bool has_prev_ = false;
  Tok prev_kind_ = Tok::punct;
  std::string_view prev_text_;
  bool template_has_subst_ = false;
  std::size_t template_start_ = 0;
};

// ---------------------------------------------------------------- literals

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Decodes one UTF-8 sequence at s[i]; advances i.
std::optional<char32_t> next_utf8(std::string_view s, std::size_t& i) {
  const unsigned char c = s[i];
  int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) return std::nullopt;
  char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
  for (int k = 1; k < len; ++k) {
    const unsigned char cc = s[i + k];
    if ((cc & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += len;
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  return cp;
}

std::optional<std::uint32_t> hex_value(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, 16);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

// Cooked value of a string or template body (quotes stripped), as UTF-8.
std::optional<std::string> cook(std::string_view body, bool is_template) {
  std::string out;
  char32_t high = 0;  // pending high surrogate from \u escapes
  auto emit = [&](char32_t cp) -> bool {
    if (high) {
      if (cp < 0xDC00 || cp > 0xDFFF) return false;
      append_utf8(out, 0x10000 + ((high - 0xD800) << 10) + (cp - 0xDC00));
      high = 0;
      return true;
    }
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      high = cp;
      return true;
    }
    if (cp >= 0xDC00 && cp <= 0xDFFF) return false;
    append_utf8(out, cp);
    return true;
  };
  std::size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '\r' && is_template) {
      i += (i + 1 < body.size() && body[i + 1] == '\n') ? 2 : 1;
      if (!emit('\n')) return std::nullopt;
      continue;
    }
    if (body[i] != '\\') {
      auto cp = next_utf8(body, i);
      if (!cp || !emit(*cp)) return std::nullopt;
      continue;
    }
    if (++i >= body.size()) return std::nullopt;
    const char e = body[i];
    char32_t cp = 0;
    switch (e) {
      case 'n': cp = '\n'; ++i; break;
      case 't': cp = '\t'; ++i; break;
      case 'r': cp = '\r'; ++i; break;
      case 'b': cp = '\b'; ++i; break;
      case 'f': cp = '\f'; ++i; break;
      case 'v': cp = '\v'; ++i; break;
      case '0':
        if (i + 1 < body.size() && std::isdigit(static_cast<unsigned char>(body[i + 1]))) return std::nullopt;
        cp = 0;
        ++i;
        break;
      case 'x': {
        auto v = hex_value(body.substr(i + 1, 2));
        if (!v || i + 3 > body.size()) return std::nullopt;
        cp = *v;
        i += 3;
        break;
      }
      case 'u': {
        if (i + 1 < body.size() && body[i + 1] == '{') {
          auto close = body.find('}', i + 2);
          if (close == std::string_view::npos) return std::nullopt;
          auto v = hex_value(body.substr(i + 2, close - i - 2));
          if (!v || *v > 0x10FFFF) return std::nullopt;
          cp = *v;
          i = close + 1;
        } else {
          auto v = hex_value(body.substr(i + 1, 4));
          if (!v || i + 5 > body.size()) return std::nullopt;
          cp = *v;
          i += 5;
        }
        break;
      }
      case '\r':
        i += (i + 1 < body.size() && body[i + 1] == '\n') ? 2 : 1;
        continue;
      case '\n':
        ++i;
        continue;
      default: {
        if (std::isdigit(static_cast<unsigned char>(e))) return std::nullopt;  // legacy octal / \8 \9
        auto c = next_utf8(body, i);
        if (!c) return std::nullopt;
        if (*c == 0x2028 || *c == 0x2029) continue;  // line continuation
        cp = *c;
        break;
      }
    }
    if (!emit(cp)) return std::nullopt;
  }
  if (high) return std::nullopt;
  return out;
}

std::string quote_single(std::string_view value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out = "'";
  std::size_t i = 0;
  while (i < value.size()) {
    const auto start = i;
    const char32_t cp = *next_utf8(value, i);
    switch (cp) {
      case '\\': out += "\\\\"; continue;
      case '\'': out += "\\'"; continue;
      case '\n': out += "\\n"; continue;
      case '\r': out += "\\r"; continue;
      case '\t': out += "\\t"; continue;
      case '\b': out += "\\b"; continue;
      case '\f': out += "\\f"; continue;
      case '\v': out += "\\v"; continue;
      case 0x2028: out += "\\u2028"; continue;
      case 0x2029: out += "\\u2029"; continue;
      default: break;
    }
    if (cp < 0x20 || cp == 0x7F) {
      out += "\\x";
      out += kHex[cp >> 4];
      out += kHex[cp & 0xF];
    } else {
      out.append(value.substr(start, i - start));
    }
  }
  return out + "'";
}

std::optional<double> number_value(std::string_view text) {
  std::string digits;
  for (char c : text) {
    if (c != '_') digits += c;
  }
  if (digits.empty() || digits.back() == 'n') return std::nullopt;  // BigInt
  if (digits.size() > 2 && digits[0] == '0' && std::isalpha(static_cast<unsigned char>(digits[1]))) {
    const char p = static_cast<char>(std::tolower(static_cast<unsigned char>(digits[1])));
    const int base = p == 'x' ? 16 : p == 'o' ? 8 : p == 'b' ? 2 : 0;
    if (base == 0) return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data() + 2, digits.data() + digits.size(), v, base);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    if (v > (std::uint64_t{1} << 53)) return std::nullopt;
    return static_cast<double>(v);
  }
  if (digits.size() > 1 && digits[0] == '0' && std::isdigit(static_cast<unsigned char>(digits[1]))) {
    return std::nullopt;  // legacy octal
  }
  if (digits.find_first_not_of("0123456789.eE+-") != std::string::npos) return std::nullopt;
  if (digits[0] == '.') digits.insert(digits.begin(), '0');
  return detail::parse_decimal(digits);
}

// Canonical literal for the token run [first, last), if it is one.
std::optional<std::string> literal_of(const Token* first, const Token* last) {
  bool negative = false;
  if (last - first == 2 && first->kind == Tok::punct && (first->text == "-" || first->text == "+") &&
      first[1].kind == Tok::number) {
    negative = first->text == "-";
    ++first;
  }
  if (last - first != 1) return std::nullopt;
  const Token& t = *first;
  switch (t.kind) {
    case Tok::number: {
      auto v = number_value(t.text);
      if (!v) return std::nullopt;
      return js_number_to_string(negative ? -*v : *v);
    }
    case Tok::string: {
      auto v = cook(t.text.substr(1, t.text.size() - 2), false);
      if (!v) return std::nullopt;
      return quote_single(*v);
    }
    case Tok::tmpl: {
      if (t.substitutions) return std::nullopt;
      auto v = cook(t.text.substr(1, t.text.size() - 2), true);
      if (!v) return std::nullopt;
      return quote_single(*v);
    }
    case Tok::ident:
      if (t.text == "true" || t.text == "false") return std::string(t.text);
      return std::nullopt;
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------- statements

bool is_punct(const Token& t, std::string_view p) { return t.kind == Tok::punct && t.text == p; }

bool is_open(const Token& t) { return t.kind == Tok::punct && (t.text == "(" || t.text == "[" || t.text == "{"); }
bool is_close(const Token& t) { return t.kind == Tok::punct && (t.text == ")" || t.text == "]" || t.text == "}"); }

bool ends_expression(const Token& t) {
  if (t.kind == Tok::punct) {
    return t.text == ")" || t.text == "]" || t.text == "}" || t.text == "++" || t.text == "--";
  }
  return t.kind != Tok::ident || !regex_after_keywords().count(t.text);
}

bool continues_expression(const Token& t) {
  return t.kind == Tok::ident &&
         (t.text == "in" || t.text == "instanceof" || t.text == "of" || t.text == "else" ||
          t.text == "catch" || t.text == "finally" || t.text == "while");
}

// Tokens that cannot continue an expression, so a line break before them
// ends the statement.
bool starts_statement(const Token& t) {
  switch (t.kind) {
    case Tok::number:
    case Tok::string:
    case Tok::regex:
      return true;
    case Tok::punct:
      return t.text == "!" || t.text == "~" || t.text == "{" || t.text == "++" || t.text == "--";
    default:
      return false;
  }
}

struct Binding {
  std::size_t first_seen = 0;
  std::optional<std::string> function_hash;
  bool assigned = false;
  std::optional<std::string> value;  // of the last assignment
};

class TopLevel {
 public:
  TopLevel(std::string_view src, std::vector<Token> tokens) : src_(src), t_(std::move(tokens)) {
    std::vector<std::size_t> open;
    match_.assign(t_.size(), 0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (is_open(t_[i])) {
        open.push_back(i);
      } else if (is_close(t_[i])) {
        match_[open.back()] = i;
        match_[i] = open.back();
        open.pop_back();
      }
    }
  }

  std::vector<JsSymbol> run() {
    std::size_t i = 0;
    while (i < t_.size()) {
      const std::size_t before = i;
      i = statement(i);
      if (i < t_.size() && is_punct(t_[i], ";")) ++i;
      if (i == before) ++i;
    }
    std::vector<std::pair<std::size_t, JsSymbol>> order;
    for (auto& [name, b] : bindings_) {
      JsSymbol sym{name, SymbolKind::variable, std::nullopt, std::nullopt};
      if (b.assigned) {
        sym.expected_value = b.value;
      } else if (b.function_hash) {
        sym.kind = SymbolKind::function;
        sym.source_hash = b.function_hash;
      }
      order.emplace_back(b.first_seen, std::move(sym));
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<JsSymbol> out;
    for (auto& [seen, sym] : order) out.push_back(std::move(sym));
    return out;
  }

 private:
  bool punct_at(std::size_t i, std::string_view p) const { return i < t_.size() && is_punct(t_[i], p); }

  bool is_ident(std::size_t i, std::string_view text = {}) const {
    return i < t_.size() && t_[i].kind == Tok::ident && (text.empty() || t_[i].text == text);
  }

  Binding& binding(std::string_view name, std::size_t token) {
    auto [it, inserted] = bindings_.try_emplace(std::string(name));
    if (inserted) it->second.first_seen = token;
    return it->second;
  }

  // End of an expression or statement starting at `from`: the first ';'
  // (or ',' when `at_comma`) at its own nesting level, or an automatic
  // semicolon point. Returns the index of the terminating token.
  std::size_t expression_end(std::size_t from, bool at_comma) const {
    std::size_t j = from;
    while (j < t_.size()) {
      const Token& t = t_[j];
      if (j > from) {
        if (is_punct(t, ";") || (at_comma && is_punct(t, ","))) return j;
        if (is_close(t)) return j;  // only reached when unbalanced
        const Token& prev = t_[j - 1];
        if (ends_expression(prev) &&
            ((t.kind == Tok::ident && !continues_expression(t) && (t.newline_before || is_punct(prev, "}"))) ||
             (t.newline_before && starts_statement(t)))) {
          return j;
        }
      }
      j = is_open(t) ? match_[j] + 1 : j + 1;
    }
    return j;
  }

  std::size_t statement(std::size_t i) {
    if (is_ident(i, "function")) return function_declaration(i, i);
    if (is_ident(i, "async") && is_ident(i + 1, "function") && !t_[i + 1].newline_before) {
      return function_declaration(i, i + 1);
    }
    if (is_ident(i, "var") || is_ident(i, "const") ||
        (is_ident(i, "let") && (is_ident(i + 1) || punct_at(i + 1, "[") || punct_at(i + 1, "{")))) {
      return declaration(i);
    }
    if (auto end = assignment(i)) return *end;
    return expression_end(i, false);
  }

  std::size_t function_declaration(std::size_t start, std::size_t kw) {
    std::size_t j = kw + 1;
    if (j < t_.size() && is_punct(t_[j], "*")) ++j;
    if (!is_ident(j)) return expression_end(start, false);
    const std::size_t name = j++;
    if (j >= t_.size() || !is_punct(t_[j], "(")) return expression_end(start, false);
    j = match_[j] + 1;
    if (j >= t_.size() || !is_punct(t_[j], "{")) return expression_end(start, false);
    const std::size_t close = match_[j];
    const auto slice = src_.substr(t_[start].begin, t_[close].end - t_[start].begin);
    binding(t_[name].text, name).function_hash = sha256_hex(slice);
    return close + 1;
  }

  void assign(std::size_t name, std::size_t value_begin, std::size_t value_end) {
    auto& b = binding(t_[name].text, name);
    b.assigned = true;
    b.value = value_begin < value_end ? literal_of(&t_[value_begin], t_.data() + value_end) : std::nullopt;
  }

  std::size_t declaration(std::size_t i) {
    std::size_t j = i + 1;
    while (j < t_.size()) {
      std::optional<std::size_t> name;
      if (is_ident(j)) {
        name = j++;
      } else if (is_punct(t_[j], "[") || is_punct(t_[j], "{")) {
        j = match_[j] + 1;  // destructuring: bindings not tracked
      } else {
        return expression_end(j, false);
      }
      if (j < t_.size() && is_punct(t_[j], "=")) {
        const auto end = expression_end(j + 1, true);
        if (name) assign(*name, j + 1, end);
        j = end;
      } else if (name) {
        binding(t_[*name].text, *name);
      }
      if (j < t_.size() && is_punct(t_[j], ",")) {
        ++j;
        continue;
      }
      return j;
    }
    return j;
  }

  std::optional<std::size_t> assignment(std::size_t i) {
    std::size_t name = i;
    if ((is_ident(i, "window") || is_ident(i, "self") || is_ident(i, "globalThis")) && i + 2 < t_.size() &&
        is_punct(t_[i + 1], ".") && is_ident(i + 2)) {
      name = i + 2;
    }
    if (!is_ident(name) || t_[name].text == "this" || regex_after_keywords().count(t_[name].text)) {
      return std::nullopt;
    }
    if (name + 1 >= t_.size() || !is_punct(t_[name + 1], "=")) return std::nullopt;
    const auto end = expression_end(name + 2, false);
    assign(name, name + 2, end);
    return end;
  }

  std::string_view src_;
  std::vector<Token> t_;
  std::vector<std::size_t> match_;
  std::map<std::string, Binding> bindings_;
};

}  // namespace

std::string js_number_to_string(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value < 0 ? "-Infinity" : "Infinity";
  if (value == 0) return "0";
  if (value < 0) return "-" + js_number_to_string(-value);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string_view sci(buf, ptr - buf);
  const auto e_pos = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e_pos)) {
    if (c != '.') digits += c;
  }
  int exp10 = 0;
  auto exp_text = sci.substr(e_pos + 1);
  if (exp_text.front() == '+') exp_text.remove_prefix(1);
  std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exp10);
  const int k = static_cast<int>(digits.size());
  const int n = exp10 + 1;  // value = 0.digits * 10^n
  if (k <= n && n <= 21) return digits + std::string(n - k, '0');
  if (0 < n && n <= 21) return digits.substr(0, n) + "." + digits.substr(n);
  if (-6 < n && n <= 0) return "0." + std::string(-n, '0') + digits;
  const std::string e = (n - 1 >= 0 ? "e+" : "e-") + std::to_string(std::abs(n - 1));
  if (k == 1) return digits + e;
  return digits.substr(0, 1) + "." + digits.substr(1) + e;
}

std::optional<std::string> canonical_js_literal(std::string_view literal) {
  try {
    auto tokens = Lexer(literal).run();
    if (tokens.empty()) return std::nullopt;
    return literal_of(tokens.data(), tokens.data() + tokens.size());
  } catch (const LexError&) {
    return std::nullopt;
  }
}

std::optional<std::vector<JsSymbol>> resolve_js_symbols(std::string_view source, Diagnostics* diag) {
  std::vector<Token> tokens;
  try {
    tokens = Lexer(source).run();
  } catch (const LexError& e) {
    if (diag) diag->warnings.push_back("js: " + e.reason + " at offset " + std::to_string(e.offset));
    return std::nullopt;
  }
  return TopLevel(source, std::move(tokens)).run();
}

std::optional<Feature> extract_js_features(std::string_view path, std::string_view bytes,
                                           const ExtractOptions& options, Diagnostics* diag) {
  Diagnostics local;
  auto symbols = resolve_js_symbols(bytes, diag ? &local : nullptr);
  if (diag) {
    for (auto& w : local.warnings) diag->warnings.push_back(std::string(path) + ": " + std::move(w));
  }
  if (!symbols || symbols->empty()) return std::nullopt;
  if (symbols->size() > options.max_subfeatures) symbols->resize(options.max_subfeatures);
  std::vector<Subfeature> subs(symbols->begin(), symbols->end());
  return make_feature(std::string(path), FileType::js, std::move(subs));
}

}  // namespace corsica::extract
