// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_HASH_HPP
#define TAXOSEG_HASH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace taxoseg {

// 64-bit FNV-1a. Used for content fingerprints (taxonomy hash in reports,
// byte-exactness checks in tests); not a cryptographic hash.
inline uint64_t fnv1a64(const void* data, size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

inline std::string content_hash_hex(std::string_view bytes) {
    uint64_t h = fnv1a64(bytes);
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace taxoseg

#endif
