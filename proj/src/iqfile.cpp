#include "longsync/iqfile.hpp"

#include <bit>
#include <cstdio>

static_assert(std::endian::native == std::endian::little,
              "IQ file I/O assumes a little-endian host");
static_assert(sizeof(float) == 4);

namespace longsync {

void write_iq(const std::string& path, const IqStream& x) {
    IqFileWriter w(path);
    w.write(x.samples.data(), x.samples.size());
}

IqStream read_iq(const std::string& path, double sample_rate, int sps) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw FormatError("cannot open: " + path);
    std::fseek(f, 0, SEEK_END);
    long bytes = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    if (bytes % 8 != 0) {
        std::fclose(f);
        throw FormatError("truncated IQ file (odd float count): " + path);
    }
    IqStream out;
    out.sample_rate = sample_rate;
    out.sps = sps;
    out.samples.resize(static_cast<size_t>(bytes) / 8);
    size_t got = std::fread(out.samples.data(), 8, out.samples.size(), f);
    std::fclose(f);
    if (got != out.samples.size()) throw FormatError("short read: " + path);
    return out;
}

IqFileWriter::IqFileWriter(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw FormatError("cannot open for writing: " + path);
    file_ = f;
}

IqFileWriter::~IqFileWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void IqFileWriter::write(const cfloat* samples, size_t n) {
    if (n == 0) return;
    size_t put = std::fwrite(samples, 8, n, static_cast<std::FILE*>(file_));
    if (put != n) throw FormatError("IQ write failed");
    count_ += n;
}

}  // namespace longsync
