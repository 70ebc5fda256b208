#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "corsica/corpus/file_set.hpp"

namespace corsica::corpus {

/// Webroot candidates inside an unpacked firmware tree, searched in order.
inline constexpr std::array<std::string_view, 7> kWebrootCandidates{
    "www", "web", "htdocs", "html", "webroot", "usr/local/www", "var/www"};

/// Every regular file under `root` keyed by its path relative to `root`.
/// Symlinks are not followed. Throws IngestError when `root` is unreadable.
ServiceFileSet ingest_install_tree(const std::filesystem::path& root, const ServiceId& service);

/// Locates the web server root inside `rootfs`. A hint (absolute or relative
/// to `rootfs`) is used verbatim; otherwise the first existing candidate
/// directory wins. Throws IngestError("webroot not found ...").
std::filesystem::path locate_webroot(const std::filesystem::path& rootfs,
                                     const std::optional<std::filesystem::path>& hint);

ServiceFileSet ingest_firmware_root(const std::filesystem::path& rootfs,
                                    const std::optional<std::filesystem::path>& webroot_hint,
                                    const ServiceId& service);

}  // namespace corsica::corpus
