#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "corsica/corpus/crawl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <future>
#include <regex>
#include <set>

#include "corsica/error.hpp"

namespace corsica::corpus {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  bool trailing_slash = false;
  std::size_t start = path.empty() || path.front() != '/' ? 0 : 1;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    const auto seg = path.substr(start, end - start);
    const bool last = end == path.size();
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = last;
    } else if (seg == "." || seg.empty()) {
      trailing_slash = last;
    } else {
      out.push_back(seg);
      trailing_slash = false;
    }
    start = end + 1;
  }
  std::string result;
  for (auto seg : out) {
    result += '/';
    result += seg;
  }
  if (result.empty() || trailing_slash) result += '/';
  return result;
}

std::uint16_t default_port(std::string_view scheme) { return scheme == "https" ? 443 : 80; }

bool ignorable_ref(std::string_view ref) {
  auto l = lower(ref.substr(0, std::min<std::size_t>(ref.size(), 12)));
  for (std::string_view prefix : {"data:", "javascript:", "mailto:", "tel:", "about:", "blob:"}) {
    if (l.rfind(prefix, 0) == 0) return true;
  }
  return ref.empty() || ref.front() == '#';
}

std::string decode_entities(std::string s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&lt;", '<'}, {"&gt;", '>'}};
  for (const auto& [entity, ch] : kEntities) {
    std::size_t pos = 0;
    while ((pos = s.find(entity, pos)) != std::string::npos) {
      s.replace(pos, entity.size(), 1, ch);
      ++pos;
    }
  }
  return s;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n\f");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n\f");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> collect(std::string_view text, const std::regex& re,
                                 std::initializer_list<int> groups) {
  std::vector<std::string> out;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    for (int g : groups) {
      if ((*it)[g].matched) {
        auto value = trim((*it)[g].str());
        if (!value.empty()) out.push_back(std::move(value));
        break;
      }
    }
  }
  return out;
}

bool is_asset(const Url& url) {
  auto type = file_type_for(url.path);
  return type == FileType::image || type == FileType::css || type == FileType::js;
}

struct QueueItem {
  Url url;
  std::size_t depth = 0;
};

struct Fetched {
  int status = 0;
  std::string body;
  std::string content_type;
  std::string error;
};

Fetched fetch(const Url& url, std::chrono::milliseconds timeout) {
  Fetched out;
  try {
    httplib::Client client(url.origin());
    auto secs = timeout.count() / 1000;
    auto usecs = (timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_follow_location(true);
    client.enable_server_certificate_verification(false);
    auto target = url.path + (url.query.empty() ? "" : "?" + url.query);
    auto res = client.Get(target);
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = std::move(res->body);
    out.content_type = lower(res->get_header_value("Content-Type"));
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::optional<Url> Url::parse(std::string_view text) {
  auto sep = text.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  Url url;
  url.scheme = lower(text.substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  auto rest = text.substr(sep + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  auto path_start = rest.find_first_of("/?");
  auto authority = rest.substr(0, path_start);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    unsigned port = 0;
    auto digits = authority.substr(colon + 1);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || p != digits.data() + digits.size() || port == 0 || port > 65535) {
      return std::nullopt;
    }
    url.port = static_cast<std::uint16_t>(port);
    authority = authority.substr(0, colon);
  } else {
    url.port = default_port(url.scheme);
  }
  url.host = lower(authority);
  if (url.host.empty()) return std::nullopt;
  std::string_view path_query = path_start == std::string_view::npos ? "" : rest.substr(path_start);
  auto q = path_query.find('?');
  std::string path(path_query.substr(0, q));
  if (q != std::string_view::npos) url.query = std::string(path_query.substr(q + 1));
  url.path = remove_dot_segments(path.empty() ? "/" : path);
  return url;
}

std::optional<Url> Url::resolve(std::string_view ref_in) const {
  auto ref = trim(ref_in);
  if (ignorable_ref(ref)) return std::nullopt;
  if (auto hash = ref.find('#'); hash != std::string::npos) ref.resize(hash);
  if (ref.find("://") != std::string::npos) {
    auto colon = ref.find(':');
    auto slash = ref.find('/');
    if (colon < slash) return Url::parse(ref);
  }
  if (ref.rfind("//", 0) == 0) return Url::parse(scheme + ":" + ref);
  if (auto colon = ref.find(':'); colon != std::string::npos && colon < ref.find_first_of("/?")) {
    return std::nullopt;  // some other scheme
  }
  Url out = *this;
  auto q = ref.find('?');
  std::string ref_path = ref.substr(0, q);
  out.query = q == std::string::npos ? std::string{} : ref.substr(q + 1);
  if (ref_path.empty()) {
    if (q == std::string::npos) out.query = query;
    return out;
  }
  if (ref_path.front() == '/') {
    out.path = remove_dot_segments(ref_path);
  } else {
    auto dir = path.substr(0, path.rfind('/') + 1);
    out.path = remove_dot_segments(dir + ref_path);
  }
  return out;
}

std::string Url::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

std::string Url::str() const {
  return origin() + path + (query.empty() ? "" : "?" + query);
}

std::string Url::web_path() const {
  std::string p = path.substr(1);
  if (p.empty() || p.back() == '/') p += "index.html";
  if (!query.empty()) p += "?" + query;
  return p;
}

std::vector<std::string> html_links(std::string_view html) {
  static const std::regex re(R"re(\b(?:src|href)\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s"'>]+)))re",
                             std::regex::icase);
  auto links = collect(html, re, {1, 2, 3});
  for (auto& l : links) l = decode_entities(std::move(l));
  return links;
}

std::vector<std::string> css_links(std::string_view css) {
  static const std::regex url_re(R"re(url\(\s*(?:"([^"]*)"|'([^']*)'|([^\s'")]+))\s*\))re",
                                 std::regex::icase);
  static const std::regex import_re(R"re(@import\s+(?:"([^"]*)"|'([^']*)'))re", std::regex::icase);
  // Keep document order across both forms.
  std::vector<std::pair<std::size_t, std::string>> found;
  std::string s(css);
  for (const auto* re : {&url_re, &import_re}) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator(); ++it) {
      for (int g = 1; g <= 3; ++g) {
        if (g < static_cast<int>(it->size()) && (*it)[g].matched) {
          auto v = trim((*it)[g].str());
          if (!v.empty()) found.emplace_back(static_cast<std::size_t>(it->position(0)), std::move(v));
          break;
        }
      }
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [pos, v] : found) out.push_back(std::move(v));
  return out;
}

std::vector<std::string> js_links(std::string_view script) {
  static const std::regex re(
      R"re("([^"\\\n]*\.(?:png|gif|jpe?g|svg|ico|bmp|webp|css|m?js)(?:\?[^"\\\n]*)?)")re"
      R"re(|'([^'\\\n]*\.(?:png|gif|jpe?g|svg|ico|bmp|webp|css|m?js)(?:\?[^'\\\n]*)?)')re",
      std::regex::icase);
  return collect(script, re, {1, 2});
}

CrawlResult crawl_live(std::string_view base_url, const ServiceId& service, const CrawlLimits& limits) {
  validate(service);
  auto base = Url::parse(base_url);
  if (!base) throw CrawlError("invalid base URL '" + std::string(base_url) + "'");

  CrawlResult result;
  result.set.service = service;
  result.set.provenance = Provenance::crawl;

  std::deque<QueueItem> queue{{*base, 0}};
  std::set<Url> seen{*base};
  std::size_t pages_fetched = 0;
  const auto concurrency = std::max<std::size_t>(1, limits.max_concurrency);

  while (!queue.empty()) {
    std::vector<QueueItem> batch;
    while (!queue.empty() && batch.size() < concurrency) {
      auto item = std::move(queue.front());
      queue.pop_front();
      if (is_asset(item.url)) {
        if (item.depth > limits.max_depth + 1) continue;
      } else {
        if (item.depth > limits.max_depth || pages_fetched >= limits.max_pages) continue;
        ++pages_fetched;
      }
      batch.push_back(std::move(item));
    }
    if (batch.empty()) continue;

    std::vector<std::future<Fetched>> futures;
    futures.reserve(batch.size());
    for (const auto& item : batch) {
      futures.push_back(std::async(std::launch::async, fetch, item.url, limits.timeout));
    }

    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& item = batch[i];
      auto got = futures[i].get();
      const bool is_base = item.depth == 0;
      if (!got.error.empty() || got.status != 200) {
        auto why = got.error.empty() ? "HTTP " + std::to_string(got.status) : got.error;
        if (is_base) throw CrawlError("cannot fetch " + item.url.str() + ": " + why);
        result.warnings.push_back(item.url.str() + ": " + why);
        continue;
      }

      std::vector<std::string> refs;
      const bool asset = is_asset(item.url);
      const bool html = !asset && (got.content_type.find("text/html") != std::string::npos ||
                                   got.content_type.find("xhtml") != std::string::npos);
      if (asset) {
        auto type = file_type_for(item.url.path);
        if (type == FileType::css) refs = css_links(got.body);
        if (type == FileType::js) refs = js_links(got.body);
      } else if (html) {
        refs = html_links(got.body);
      } else {
        continue;  // non-HTML page candidate (pdf, json, ...)
      }

      if (item.url.same_host(*base)) {
        auto key = item.url.web_path();
        if (is_valid_web_path(key)) {
          result.set.add(key, std::move(got.body));
        } else {
          result.warnings.push_back(item.url.str() + ": unusable path");
        }
      }

      std::vector<Url> discovered;
      for (const auto& ref : refs) {
        auto url = item.url.resolve(ref);
        if (!url) continue;
        if (limits.same_host_only && !url->same_host(*base)) continue;
        if (seen.insert(*url).second) discovered.push_back(std::move(*url));
      }
      std::sort(discovered.begin(), discovered.end(),
                [](const Url& a, const Url& b) { return a.str() < b.str(); });
      for (auto& url : discovered) queue.push_back({std::move(url), item.depth + 1});
    }
  }
  return result;
}

}  // namespace corsica::corpus
