#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace vfa {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 sha256(std::span<const std::uint8_t> bytes);
Sha256 sha256(std::string_view text);
std::string to_hex(const Sha256 &digest);

// Hex digest of a file's contents; throws Error(Io) when unreadable.
std::string file_digest_hex(const std::string &path);

}  // namespace vfa
