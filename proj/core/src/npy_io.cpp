// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/npy_io.hpp"

#include <cstring>
#include <limits>
#include <sstream>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr size_t kMagicLen = 6;

// Skips blanks, returns position of the first non-space character.
size_t skip_spaces(std::string_view s, size_t pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    return pos;
}

// Extracts the quoted string value following "'key':" in the header dict.
std::string_view dict_value(std::string_view header, std::string_view key, const char* what) {
    std::string pattern = "'" + std::string(key) + "':";
    size_t at = header.find(pattern);
    if (at == std::string_view::npos) throw IoError(std::string(what) + ": header missing key '" + std::string(key) + "'");
    return header.substr(skip_spaces(header, at + pattern.size()));
}

std::vector<int64_t> parse_shape(std::string_view tail, const char* what) {
    if (tail.empty() || tail[0] != '(') throw IoError(std::string(what) + ": malformed shape tuple");
    size_t close = tail.find(')');
    if (close == std::string_view::npos) throw IoError(std::string(what) + ": malformed shape tuple");
    std::string inner(tail.substr(1, close - 1));
    std::vector<int64_t> shape;
    std::istringstream in(inner);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        size_t a = tok.find_first_not_of(" \t");
        if (a == std::string::npos) continue;  // trailing comma of 1-tuples
        size_t b = tok.find_last_not_of(" \t");
        try {
            shape.push_back(std::stoll(tok.substr(a, b - a + 1)));
        } catch (const std::exception&) {
            throw IoError(std::string(what) + ": non-integer shape entry '" + tok + "'");
        }
    }
    return shape;
}

}  // namespace

NpyArray load_npy(std::string_view bytes) {
    const char* what = "npy";
    if (bytes.size() < kMagicLen + 4 || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0)
        throw IoError("npy: bad magic");
    unsigned major = static_cast<unsigned char>(bytes[6]);
    unsigned minor = static_cast<unsigned char>(bytes[7]);
    if (major != 1 || minor != 0)
        throw IoError("npy: unsupported version " + std::to_string(major) + "." + std::to_string(minor));

    uint16_t header_len = static_cast<uint16_t>(static_cast<unsigned char>(bytes[8])) |
                          static_cast<uint16_t>(static_cast<unsigned char>(bytes[9])) << 8;
    size_t data_start = 10 + static_cast<size_t>(header_len);
    if (bytes.size() < data_start) throw IoError("npy: truncated header");
    std::string_view header = bytes.substr(10, header_len);

    auto descr_tail = dict_value(header, "descr", what);
    if (descr_tail.size() < 5 || descr_tail.substr(0, 5) != "'<f4'")
        throw IoError("npy: wrong dtype (expected little-endian float32 '<f4')");

    auto order_tail = dict_value(header, "fortran_order", what);
    if (order_tail.substr(0, 5) == "True,")
        throw IoError("npy: fortran_order arrays are not supported (C order required)");
    if (order_tail.substr(0, 5) != "False")
        throw IoError("npy: malformed fortran_order value");

    NpyArray arr;
    arr.shape = parse_shape(dict_value(header, "shape", what), what);

    size_t count = 1;
    for (int64_t d : arr.shape) {
        if (d < 0) throw IoError("npy: negative shape entry");
        count *= static_cast<size_t>(d);
    }
    if (bytes.size() < data_start + count * 4) throw IoError("npy: truncated payload");

    arr.data.resize(count);
    std::memcpy(arr.data.data(), bytes.data() + data_start, count * 4);
    return arr;
}

std::string store_npy(const std::vector<int64_t>& shape, const std::vector<float>& data) {
    std::ostringstream dict;
    dict << "{'descr': '<f4', 'fortran_order': False, 'shape': (";
    for (size_t i = 0; i < shape.size(); ++i) {
        dict << shape[i];
        if (i + 1 < shape.size()) dict << ", ";
    }
    if (shape.size() == 1) dict << ",";
    dict << "), }";

    std::string header = dict.str();
    // Total preamble (magic + version + length + header incl. final newline)
    // is padded with spaces to a 64-byte boundary.
    size_t unpadded = kMagicLen + 2 + 2 + header.size() + 1;
    size_t padding = (64 - unpadded % 64) % 64;
    header.append(padding, ' ');
    header.push_back('\n');

    std::string out;
    out.reserve(10 + header.size() + data.size() * 4);
    out.append(kMagic, kMagicLen);
    out.push_back('\x01');
    out.push_back('\x00');
    uint16_t len = static_cast<uint16_t>(header.size());
    out.push_back(static_cast<char>(len & 0xff));
    out.push_back(static_cast<char>(len >> 8));
    out += header;
    out.append(reinterpret_cast<const char*>(data.data()), data.size() * 4);
    return out;
}

ProbMap load_prob_map(std::string_view bytes) {
    NpyArray arr = load_npy(bytes);
    if (arr.shape.size() != 3)
        throw IoError("probability map must be 3-D (height, width, channels), got " +
                      std::to_string(arr.shape.size()) + "-D");
    constexpr int64_t kMax = std::numeric_limits<int>::max();
    if (arr.shape[0] > kMax || arr.shape[1] > kMax || arr.shape[2] > kMax)
        throw IoError("probability map dimensions out of range");
    ProbMap map;
    map.height = static_cast<int>(arr.shape[0]);
    map.width = static_cast<int>(arr.shape[1]);
    map.channels = static_cast<int>(arr.shape[2]);
    map.data = std::move(arr.data);
    return map;
}

std::string store_prob_map(const ProbMap& map) {
    return store_npy({map.height, map.width, map.channels}, map.data);
}

FloatGrid load_float_grid(std::string_view bytes) {
    NpyArray arr = load_npy(bytes);
    if (arr.shape.size() != 2)
        throw IoError("grid must be 2-D (height, width), got " + std::to_string(arr.shape.size()) + "-D");
    FloatGrid grid;
    grid.height = static_cast<int>(arr.shape[0]);
    grid.width = static_cast<int>(arr.shape[1]);
    grid.data = std::move(arr.data);
    return grid;
}

std::string store_float_grid(const FloatGrid& grid) {
    return store_npy({grid.height, grid.width}, grid.data);
}

}  // namespace taxoseg
