// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_ERROR_HPP
#define TAXOSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace taxoseg {

/// Base exception for all library failures (parse, IO, contract violations).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input file or byte stream could not be decoded.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace taxoseg

#endif
