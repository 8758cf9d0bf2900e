#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace polyfair {

// FNV-1a, 64 bit. Used to fingerprint documents for provenance, not for
// anything security related.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

}  // namespace polyfair
