#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bilateral {

/// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string iso8601_utc_now();

/// FNV-1a 64-bit hash, rendered as 16 lowercase hex digits. Stable across
/// platforms and runs; used for cache keys and config fingerprints.
std::string fnv1a_hex(std::string_view data);

}  // namespace bilateral
