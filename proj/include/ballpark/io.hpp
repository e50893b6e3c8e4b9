#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "errors.hpp"

namespace ballpark::detail {

// Little-endian primitive IO for the binary file formats. Reads throw
// InputError on truncation so callers never see half a record.

inline void write_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> buf;
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf.data(), buf.size());
}

inline void write_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> buf;
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf.data(), buf.size());
}

inline void write_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    write_u64_le(out, bits);
}

inline std::uint8_t read_u8(std::istream& in) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw InputError("unexpected end of file");
    return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32_le(std::istream& in) {
    std::array<char, 4> buf;
    if (!in.read(buf.data(), buf.size())) throw InputError("unexpected end of file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

inline std::uint64_t read_u64_le(std::istream& in) {
    std::array<char, 8> buf;
    if (!in.read(buf.data(), buf.size())) throw InputError("unexpected end of file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

inline double read_f64_le(std::istream& in) {
    const std::uint64_t bits = read_u64_le(in);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace ballpark::detail
