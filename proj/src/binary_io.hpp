// Little-endian primitive encoding shared by the binary dump formats.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "frozenperc/lattice.hpp"

namespace frozenperc::detail {

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
    char buf[sizeof(UInt)];
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    }
    out.write(buf, sizeof(UInt));
}

template <typename UInt>
UInt read_le(std::istream& in) {
    unsigned char buf[sizeof(UInt)];
    in.read(reinterpret_cast<char*>(buf), sizeof(UInt));
    if (!in) throw std::runtime_error("truncated binary stream");
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        value |= static_cast<UInt>(buf[i]) << (8 * i);
    }
    return value;
}

inline void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
inline double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

inline void write_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char buf[4];
    in.read(buf, 4);
    if (!in || std::memcmp(buf, magic, 4) != 0) {
        throw std::runtime_error(std::string("bad magic, expected ") + magic);
    }
}

inline void write_region(std::ostream& out, const Region& r) {
    write_le<std::uint8_t>(out, static_cast<std::uint8_t>(r.kind));
    for (double v : {r.center.x, r.center.y, r.inner, r.outer, r.x1, r.x2, r.y1, r.y2}) {
        write_f64(out, v);
    }
}

inline Region read_region(std::istream& in) {
    Region r;
    const auto kind = read_le<std::uint8_t>(in);
    if (kind > 2) throw std::runtime_error("bad region kind");
    r.kind = static_cast<RegionKind>(kind);
    r.center.x = read_f64(in);
    r.center.y = read_f64(in);
    r.inner = read_f64(in);
    r.outer = read_f64(in);
    r.x1 = read_f64(in);
    r.x2 = read_f64(in);
    r.y1 = read_f64(in);
    r.y2 = read_f64(in);
    return r;
}

}  // namespace frozenperc::detail
