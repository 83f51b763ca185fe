#include "rankone/cache.hpp"

#include "rankone/errors.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace rankone {

namespace {

constexpr size_t kHeaderSize = 13;

void put_u64_le(uint8_t* dst, uint64_t v) {
    for (int i = 0; i < 8; ++i) dst[i] = static_cast<uint8_t>(v >> (8 * i));
}

uint64_t get_u64_le(const uint8_t* src) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(src[i]) << (8 * i);
    return v;
}

} // namespace

std::optional<CacheHeader> read_cache_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    uint8_t header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) return std::nullopt;
    if (std::memcmp(header, kCacheMagic, 4) != 0) return std::nullopt;
    if (header[4] != kCacheVersion) return std::nullopt;
    uint64_t limit = get_u64_le(header + 5);
    if (limit == 0 || limit > static_cast<uint64_t>(INT64_MAX)) return std::nullopt;
    return CacheHeader{static_cast<int64_t>(limit)};
}

void write_cache(const std::string& path, const MobiusTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot open " + path + " for writing");
    uint8_t header[kHeaderSize];
    std::memcpy(header, kCacheMagic, 4);
    header[4] = kCacheVersion;
    put_u64_le(header + 5, static_cast<uint64_t>(table.limit()));
    out.write(reinterpret_cast<const char*>(header), kHeaderSize);
    const auto& codes = table.packed();
    out.write(reinterpret_cast<const char*>(codes.data()),
              static_cast<std::streamsize>(codes.size()));
    if (!out) throw std::runtime_error("cache: write failed for " + path);
}

MobiusTable read_cache(const std::string& path, int64_t segment_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw integrity_error("cache: cannot open " + path);

    uint8_t header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize))
        throw integrity_error("cache: truncated header in " + path);
    if (std::memcmp(header, kCacheMagic, 4) != 0)
        throw integrity_error("cache: bad magic in " + path);
    if (header[4] != kCacheVersion)
        throw integrity_error("cache: unsupported version in " + path);
    uint64_t limit = get_u64_le(header + 5);
    if (limit == 0 || limit > static_cast<uint64_t>(INT64_MAX))
        throw integrity_error("cache: invalid limit in " + path);

    size_t expected = static_cast<size_t>((limit + 3) / 4);
    std::vector<uint8_t> codes(expected);
    in.read(reinterpret_cast<char*>(codes.data()), static_cast<std::streamsize>(expected));
    if (in.gcount() != static_cast<std::streamsize>(expected))
        throw integrity_error("cache: truncated payload in " + path);
    char extra;
    if (in.read(&extra, 1))
        throw integrity_error("cache: trailing bytes in " + path);

    try {
        return MobiusTable::from_packed(static_cast<int64_t>(limit), std::move(codes),
                                        segment_size);
    } catch (const std::invalid_argument& e) {
        throw integrity_error(std::string("cache: ") + e.what());
    }
}

} // namespace rankone
