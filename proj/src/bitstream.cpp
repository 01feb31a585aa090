#include "longsync/bitstream.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

namespace longsync {

BitStream BitStream::from_bools(const std::vector<bool>& bits) {
    BitStream bs;
    bs.len_ = bits.size();
    bs.words_.assign((bits.size() + 63) / 64, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bs.words_[i >> 6] |= 1ull << (i & 63);
    return bs;
}

void BitStream::append(const BitStream& other) {
    if ((len_ & 63) == 0) {
        // word-aligned fast path
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        len_ += other.len_;
        return;
    }
    for (size_t i = 0; i < other.len_; ++i) push_back(other.get(i));
}

BitStream BitStream::slice(size_t pos, size_t count) const {
    if (pos + count > len_) throw std::out_of_range("BitStream slice out of range");
    BitStream out(count);
    size_t nwords = (count + 63) / 64;
    for (size_t j = 0; j < nwords; ++j) out.words_[j] = window64(pos + 64 * j);
    if (count & 63) out.words_.back() &= (1ull << (count & 63)) - 1;
    return out;
}

BitStream BitStream::complement() const {
    BitStream out(len_);
    for (size_t j = 0; j < words_.size(); ++j) out.words_[j] = ~words_[j];
    if (len_ & 63) out.words_.back() &= (1ull << (len_ & 63)) - 1;
    return out;
}

size_t BitStream::hamming_distance(const BitStream& other) const {
    if (len_ != other.len_) throw ConfigError("hamming_distance: length mismatch");
    size_t d = 0;
    for (size_t j = 0; j < words_.size(); ++j)
        d += static_cast<size_t>(std::popcount(words_[j] ^ other.words_[j]));
    return d;
}

std::vector<bool> BitStream::to_bools() const {
    std::vector<bool> out(len_);
    for (size_t i = 0; i < len_; ++i) out[i] = get(i);
    return out;
}

std::vector<uint8_t> pack(const BitStream& bs) {
    std::vector<uint8_t> bytes((bs.len() + 7) / 8, 0);
    for (size_t i = 0; i < bs.len(); ++i)
        if (bs.get(i)) bytes[i >> 3] |= uint8_t(0x80u >> (i & 7));
    return bytes;
}

BitStream unpack(const std::vector<uint8_t>& bytes, size_t bit_count) {
    if (bit_count > 8 * bytes.size())
        throw FormatError("unpack: bit count exceeds byte buffer");
    BitStream bs(bit_count);
    for (size_t i = 0; i < bit_count; ++i)
        bs.set(i, (bytes[i >> 3] >> (7 - (i & 7))) & 1u);
    return bs;
}

namespace {

std::string sidecar_path(const std::string& path) { return path + ".meta"; }

void write_file(const std::string& path, const std::vector<uint8_t>& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) throw FormatError("write failed: " + path);
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw FormatError("cannot open: " + path);
    auto size = f.tellg();
    f.seekg(0);
    std::vector<uint8_t> data(static_cast<size_t>(size));
    f.read(reinterpret_cast<char*>(data.data()), size);
    if (!f) throw FormatError("read failed: " + path);
    return data;
}

}  // namespace

void write_bits(const std::string& path, const BitStream& bs, BitFormat format) {
    if (format == BitFormat::Packed) {
        write_file(path, pack(bs));
        std::ofstream meta(sidecar_path(path));
        if (!meta) throw FormatError("cannot open for writing: " + sidecar_path(path));
        meta << "bits=" << bs.len() << "\n";
        meta << "format=packed-msb\n";
    } else {
        std::vector<uint8_t> bytes(bs.len());
        for (size_t i = 0; i < bs.len(); ++i) bytes[i] = bs.get(i) ? 1 : 0;
        write_file(path, bytes);
    }
}

BitStream read_bits(const std::string& path, BitFormat format) {
    auto bytes = read_file(path);
    if (format == BitFormat::Packed) {
        std::ifstream meta(sidecar_path(path));
        if (!meta) throw FormatError("missing sidecar: " + sidecar_path(path));
        size_t bit_count = 0;
        bool have_bits = false;
        std::string line;
        while (std::getline(meta, line)) {
            if (line.rfind("bits=", 0) == 0) {
                try {
                    bit_count = std::stoull(line.substr(5));
                } catch (const std::exception&) {
                    throw FormatError("malformed sidecar bits= line: " + line);
                }
                have_bits = true;
            }
        }
        if (!have_bits) throw FormatError("sidecar has no bits= line: " + sidecar_path(path));
        return unpack(bytes, bit_count);
    }
    BitStream bs(bytes.size());
    for (size_t i = 0; i < bytes.size(); ++i) {
        if (bytes[i] > 1)
            throw FormatError("one-bit-per-byte file contains byte value > 1");
        bs.set(i, bytes[i] == 1);
    }
    return bs;
}

}  // namespace longsync
