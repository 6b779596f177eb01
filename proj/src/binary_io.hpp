#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "glvr/error.hpp"

namespace glvr::detail {

template <class T>
T from_le_bytes(const unsigned char* bytes) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, bytes, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    T out;
    std::memcpy(&out, buf, sizeof(T));
    return out;
}

template <class T>
T read_le(std::istream& in, const std::string& what) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw ConfigError("unexpected end of file while reading " + what);
    return from_le_bytes<T>(buf);
}

template <class T>
void write_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

inline void expect_magic(std::istream& in, const char (&magic)[5], const std::string& path) {
    char got[4];
    if (!in.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw ConfigError(path + ": bad magic, expected \"" + std::string(magic) + "\"");
}

}  // namespace glvr::detail
