#pragma once

#include "rankone/mobius.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace rankone {

// On-disk layout, little-endian throughout:
//   bytes 0..3   magic "RQMU"
//   byte  4      format version (0x01)
//   bytes 5..12  limit as uint64
//   bytes 13..   ceil(limit/4) packed 2-bit codes
inline constexpr char kCacheMagic[4] = {'R', 'Q', 'M', 'U'};
inline constexpr uint8_t kCacheVersion = 0x01;

struct CacheHeader {
    int64_t limit = 0;
};

// Probe just the header; nullopt if the file is missing, too short, or
// carries the wrong magic/version. Used to decide whether an existing
// cache can be reused for a smaller limit.
std::optional<CacheHeader> read_cache_header(const std::string& path);

void write_cache(const std::string& path, const MobiusTable& table);

// Throws integrity_error on bad magic/version, truncated or oversized
// payload, reserved 11 codes, or nonzero padding past the limit.
MobiusTable read_cache(const std::string& path, int64_t segment_size);

} // namespace rankone
