#ifndef QJET_SERIAL_HPP
#define QJET_SERIAL_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qjet {

/// Error from a malformed binary file, tagged with what went wrong.
struct FormatError : std::runtime_error {
    enum class Kind { BadMagic, BadVersion, Truncated, CrcMismatch, BadHeader, BadPayload };
    Kind kind;
    FormatError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// Little-endian byte buffer writer.
class ByteWriter {
  public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) {
        buf_.push_back(static_cast<uint8_t>(v));
        buf_.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
    void bytes(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    const std::vector<uint8_t>& data() const { return buf_; }

  private:
    std::vector<uint8_t> buf_;
};

/// Little-endian byte buffer reader; throws FormatError::Truncated on
/// reads past the end.
class ByteReader {
  public:
    explicit ByteReader(std::vector<uint8_t> data) : buf_(std::move(data)) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        const uint8_t* p = take(2);
        return static_cast<uint16_t>(p[0] | (p[1] << 8));
    }
    uint32_t u32() {
        const uint8_t* p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        const uint8_t* p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    float f32() { return std::bit_cast<float>(u32()); }
    const uint8_t* take(size_t n) {
        if (pos_ + n > buf_.size()) {
            throw FormatError(FormatError::Kind::Truncated, "file is truncated");
        }
        const uint8_t* p = buf_.data() + pos_;
        pos_ += n;
        return p;
    }
    size_t pos() const { return pos_; }
    size_t remaining() const { return buf_.size() - pos_; }
    const std::vector<uint8_t>& data() const { return buf_; }

  private:
    std::vector<uint8_t> buf_;
    size_t pos_ = 0;
};

std::vector<uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::vector<uint8_t>& data);

} // namespace qjet

#endif
