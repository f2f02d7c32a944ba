// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_REPORT_HPP
#define TAXOSEG_REPORT_HPP

#include <string>
#include <string_view>

#include "taxoseg/metrics.hpp"

namespace taxoseg {

// JSON rendering of the full report. config_echo_json is embedded verbatim
// under "config" (pass "{}" or "null" when there is nothing to echo);
// taxonomy_hash is the content hash of the taxonomy file the run used.
// Output is deterministic: sorted keys, fixed number formatting.
std::string report_to_json(const EvaluationReport& report, std::string_view config_echo_json,
                           std::string_view taxonomy_hash);

// Per-class CSV: one row per leaf with F1, Dice, pooled counts and the
// coverage-regression columns.
std::string report_per_class_csv(const EvaluationReport& report);

// Row-normalized confusion matrix as a CSV grid (annotated on rows).
std::string confusion_csv(const ConfusionMatrix& matrix);

}  // namespace taxoseg

#endif
