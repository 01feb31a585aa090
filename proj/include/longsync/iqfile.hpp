#pragma once

#include <string>

#include "longsync/modem.hpp"

namespace longsync {

// Interleaved 32-bit little-endian IEEE-754 floats, I then Q, no header.
void write_iq(const std::string& path, const IqStream& x);
IqStream read_iq(const std::string& path, double sample_rate = 32000.0, int sps = 1);

// Streaming writer for chunked pipelines.
class IqFileWriter {
public:
    explicit IqFileWriter(const std::string& path);
    ~IqFileWriter();
    void write(const cfloat* samples, size_t n);
    size_t samples_written() const { return count_; }

private:
    void* file_;  // FILE*
    size_t count_ = 0;
};

}  // namespace longsync
