#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace domconf {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a of `bytes` as 16 lowercase hex digits. Identifies file contents
/// and configurations in result files; not a cryptographic hash.
std::string digest_hex(std::string_view bytes);

}  // namespace domconf
