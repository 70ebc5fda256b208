#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corsica/corpus/file_set.hpp"

namespace corsica::corpus {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  std::uint16_t port = 0;
  std::string path = "/";  // absolute path, dot segments removed
  std::string query;       // without '?'

  static std::optional<Url> parse(std::string_view text);
  /// Resolves `ref` against this URL; fragments are dropped. Returns nothing
  /// for non-http(s) references (data:, javascript:, mailto:, ...).
  std::optional<Url> resolve(std::string_view ref) const;

  std::string origin() const;  // scheme://host:port
  std::string str() const;
  bool same_host(const Url& other) const { return host == other.host && port == other.port; }

  /// Corpus key: path without the leading '/', query kept, "index.html"
  /// appended to directory paths.
  std::string web_path() const;

  auto operator<=>(const Url&) const = default;
};

// Resource references found in fetched documents, in document order.
std::vector<std::string> html_links(std::string_view html);
std::vector<std::string> css_links(std::string_view css);
std::vector<std::string> js_links(std::string_view script);

struct CrawlLimits {
  std::size_t max_pages = 50;
  std::size_t max_depth = 3;
  bool same_host_only = true;
  std::size_t max_concurrency = 4;
  std::chrono::milliseconds timeout{10000};
};

struct CrawlResult {
  ServiceFileSet set;
  std::vector<std::string> warnings;
};

/// Breadth-first crawl from `base_url`.
///
/// The base page has depth 0 and every discovered link gets its parent's
/// depth + 1. Non-asset links are page candidates: fetched while their depth
/// is <= max_depth and fewer than max_pages pages were fetched, stored only
/// when the response is HTML. Image, CSS and script links are fetched when
/// their depth is <= max_depth + 1, so a fetched page always gets its direct
/// assets. Links are queued in discovery order; the links of one document
/// are queued in lexicographic URL order. Only resources on the base host
/// are stored; with same_host_only=false off-host documents are still
/// fetched for link discovery.
///
/// Throws CrawlError when the base page cannot be fetched; other failures
/// become warnings.
CrawlResult crawl_live(std::string_view base_url, const ServiceId& service,
                       const CrawlLimits& limits = {});

}  // namespace corsica::corpus
