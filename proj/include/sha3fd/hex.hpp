#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sha3fd {

/// Lowercase hex.
std::string to_hex(std::span<const uint8_t> bytes);

/// Accepts either case; throws std::invalid_argument on odd length or bad digits.
std::vector<uint8_t> from_hex(std::string_view hex);

}  // namespace sha3fd
