#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace rankone {

// Packed 0/1 word. Bit i of the word lives in block i/64 at bit position
// i%64, so byte k of the serialized form holds symbols 8k..8k+7 with the
// first symbol in the least-significant bit.
class BitWord {
public:
    BitWord() = default;

    int64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    void reserve(int64_t bits) { blocks_.reserve(static_cast<size_t>((bits + 63) / 64)); }

    bool bit(int64_t i) const {
        return (blocks_[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1u;
    }

    void push_back(bool b) {
        if ((size_ & 63) == 0) blocks_.push_back(0);
        if (b) blocks_.back() |= uint64_t{1} << (size_ & 63);
        ++size_;
    }

    void append_ones(int64_t count) {
        for (int64_t left = count; left > 0;) {
            int off = static_cast<int>(size_ & 63);
            if (off == 0) blocks_.push_back(0);
            int64_t take = std::min<int64_t>(64 - off, left);
            uint64_t mask = take == 64 ? ~uint64_t{0} : ((uint64_t{1} << take) - 1) << off;
            blocks_.back() |= mask;
            size_ += take;
            left -= take;
        }
    }

    void append_zeros(int64_t count) {
        size_ += count;
        blocks_.resize(static_cast<size_t>((size_ + 63) / 64), 0);
    }

    // Append the first nbits of other (other may be *this only if nbits
    // does not grow past the original size; callers here never do that).
    void append(const BitWord& other, int64_t nbits) {
        int off = static_cast<int>(size_ & 63);
        int64_t full = nbits >> 6;
        blocks_.reserve(static_cast<size_t>((size_ + nbits + 63) / 64));
        if (off == 0) {
            for (int64_t w = 0; w < full; ++w) blocks_.push_back(other.blocks_[static_cast<size_t>(w)]);
        } else {
            for (int64_t w = 0; w < full; ++w) {
                uint64_t b = other.blocks_[static_cast<size_t>(w)];
                blocks_.back() |= b << off;
                blocks_.push_back(b >> (64 - off));
            }
        }
        size_ += full << 6;
        for (int64_t i = full << 6; i < nbits; ++i) push_back(other.bit(i));
    }

    void append(const BitWord& other) { append(other, other.size()); }

    int64_t count_ones() const {
        int64_t c = 0;
        for (uint64_t b : blocks_) c += std::popcount(b);
        // bits past size_ are always zero
        return c;
    }

    int64_t count_zeros() const { return size_ - count_ones(); }

    std::vector<int64_t> zero_positions() const {
        std::vector<int64_t> out;
        out.reserve(static_cast<size_t>(count_zeros()));
        for (size_t w = 0; w < blocks_.size(); ++w) {
            uint64_t inv = ~blocks_[w];
            int64_t base = static_cast<int64_t>(w) << 6;
            while (inv != 0) {
                int tz = std::countr_zero(inv);
                int64_t pos = base + tz;
                if (pos >= size_) break;
                out.push_back(pos);
                inv &= inv - 1;
            }
        }
        return out;
    }

    // Serialized layout: byte k holds symbols 8k..8k+7, first in the LSB.
    std::vector<uint8_t> bytes() const {
        std::vector<uint8_t> out(static_cast<size_t>((size_ + 7) / 8), 0);
        for (size_t k = 0; k < out.size(); ++k) {
            uint64_t block = blocks_[k / 8];
            out[k] = static_cast<uint8_t>(block >> (8 * (k % 8)));
        }
        if (size_ % 8 != 0 && !out.empty())
            out.back() &= static_cast<uint8_t>((1u << (size_ % 8)) - 1);
        return out;
    }

    std::string to_string() const {
        std::string s(static_cast<size_t>(size_), '0');
        for (int64_t i = 0; i < size_; ++i)
            if (bit(i)) s[static_cast<size_t>(i)] = '1';
        return s;
    }

    static BitWord from_string(const std::string& s) {
        BitWord w;
        w.reserve(static_cast<int64_t>(s.size()));
        for (char c : s) w.push_back(c == '1');
        return w;
    }

    friend bool operator==(const BitWord& a, const BitWord& b) {
        if (a.size_ != b.size_) return false;
        size_t full = static_cast<size_t>(a.size_ >> 6);
        for (size_t w = 0; w < full; ++w)
            if (a.blocks_[w] != b.blocks_[w]) return false;
        int rem = static_cast<int>(a.size_ & 63);
        if (rem != 0) {
            uint64_t mask = (uint64_t{1} << rem) - 1;
            if ((a.blocks_[full] & mask) != (b.blocks_[full] & mask)) return false;
        }
        return true;
    }

private:
    std::vector<uint64_t> blocks_;
    int64_t size_ = 0;
};

} // namespace rankone
