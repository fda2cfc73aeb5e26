#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pureg {

// Writes content to a temp file next to `path`, then renames it into place,
// so readers never observe a half-written file. Throws DataError on failure.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a over the raw bytes; cheap content fingerprint for run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string hash_file_hex(const std::string& path);

}  // namespace pureg
