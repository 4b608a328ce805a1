#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sentvol {

// SHA-256 digest as a lowercase hex string.
std::string sha256_hex(std::string_view data);

// Digest of a file's raw bytes; throws std::runtime_error if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace sentvol
