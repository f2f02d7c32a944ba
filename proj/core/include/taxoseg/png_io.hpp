// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_PNG_IO_HPP
#define TAXOSEG_PNG_IO_HPP

#include <string>
#include <string_view>

#include "taxoseg/grid.hpp"

namespace taxoseg {

// Label masks travel as 8-bit single-channel grayscale PNG; pixel value is
// the class channel index and 255 is the ignore value. Multi-channel or
// 16-bit inputs are rejected. The writer uses fixed encoder settings so
// equal masks produce identical bytes.

LabelMask load_label_mask(std::string_view bytes);
std::string store_label_mask(const LabelMask& mask);

}  // namespace taxoseg

#endif
