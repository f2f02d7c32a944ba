// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_FSIO_HPP
#define TAXOSEG_FSIO_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "taxoseg/error.hpp"

namespace taxoseg {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path.string());
    return bytes;
}

// Write-temp-then-rename keeps partially written artifacts out of output
// directories even when a worker dies mid-write.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failure on " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace taxoseg

#endif
