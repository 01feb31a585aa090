#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace longsync {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arbitrary-length bit sequence with packed 64-bit word storage.
// Bit i lives at word i/64, bit position i%64 (LSB first inside a word);
// padding bits beyond len() are kept zero so whole-word operations
// (XOR + popcount in the correlator) need no masking of stored state.
class BitStream {
public:
    BitStream() = default;
    explicit BitStream(size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitStream from_bools(const std::vector<bool>& bits);

    size_t len() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(size_t i, bool v) {
        check_index(i);
        uint64_t mask = 1ull << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void push_back(bool v) {
        if ((len_ & 63) == 0) words_.push_back(0);
        if (v) words_.back() |= 1ull << (len_ & 63);
        ++len_;
    }

    void append(const BitStream& other);

    BitStream slice(size_t pos, size_t count) const;

    // Bitwise complement, same length.
    BitStream complement() const;

    size_t hamming_distance(const BitStream& other) const;

    // Raw word access for the correlator. Word j holds bits 64j..64j+63.
    const std::vector<uint64_t>& words() const { return words_; }
    size_t word_count() const { return words_.size(); }
    uint64_t word(size_t j) const { return j < words_.size() ? words_[j] : 0; }

    // 64 bits starting at bit offset pos (zero-filled past the end).
    uint64_t window64(size_t pos) const {
        size_t j = pos >> 6;
        unsigned sh = pos & 63;
        uint64_t lo = word(j);
        if (sh == 0) return lo;
        return (lo >> sh) | (word(j + 1) << (64 - sh));
    }

    std::vector<bool> to_bools() const;

    bool operator==(const BitStream& other) const {
        return len_ == other.len_ && words_ == other.words_;
    }

private:
    void check_index(size_t i) const {
        if (i >= len_) throw std::out_of_range("BitStream index out of range");
    }

    size_t len_ = 0;
    std::vector<uint64_t> words_;
};

// MSB-first packing: bit 0 of the stream is the top bit of byte 0,
// final byte zero-padded.
std::vector<uint8_t> pack(const BitStream& bs);
BitStream unpack(const std::vector<uint8_t>& bytes, size_t bit_count);

enum class BitFormat {
    Packed,      // pack() bytes + sidecar "<path>.meta" with the exact bit count
    BytePerBit,  // one byte per bit, 0x00 or 0x01
};

void write_bits(const std::string& path, const BitStream& bs, BitFormat format);
BitStream read_bits(const std::string& path, BitFormat format);

}  // namespace longsync
