// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/report.hpp"

#include <cstdio>
#include <json.hpp>

namespace taxoseg {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

std::string format_fraction(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report, std::string_view config_echo_json,
                           std::string_view taxonomy_hash) {
    json doc;

    json config = json(nullptr);
    if (!config_echo_json.empty()) config = json::parse(config_echo_json);
    doc["config"] = std::move(config);
    doc["taxonomy_hash"] = std::string(taxonomy_hash);

    json ranks = json::array();
    for (const auto& cm : report.confusion) ranks.push_back(cm.rank);
    doc["ranks"] = std::move(ranks);

    json confusion;
    for (const auto& cm : report.confusion) {
        json entry;
        entry["classes"] = cm.class_ids;
        json counts = json::array();
        json normalized_rows = json::array();
        const auto normalized = cm.normalized();
        const int k = cm.size();
        json support = json::array();
        for (int row = 0; row < k; ++row) {
            json count_row = json::array();
            json norm_row = json::array();
            for (int col = 0; col < k; ++col) {
                count_row.push_back(cm.count(row, col));
                norm_row.push_back(normalized[static_cast<size_t>(row) * k + col]);
            }
            counts.push_back(std::move(count_row));
            normalized_rows.push_back(std::move(norm_row));
            support.push_back(cm.row_has_support(row));
        }
        entry["counts"] = std::move(counts);
        entry["normalized"] = std::move(normalized_rows);
        entry["row_support"] = std::move(support);
        confusion[cm.rank] = std::move(entry);
    }
    doc["confusion"] = std::move(confusion);

    json per_class;
    for (size_t c = 0; c < report.leaf_scores.per_class.size(); ++c) {
        const auto& score = report.leaf_scores.per_class[c];
        json entry;
        entry["tp"] = score.tp;
        entry["fp"] = score.fp;
        entry["fn"] = score.fn;
        entry["precision"] = score.precision;
        entry["recall"] = score.recall;
        entry["f1"] = score.f1;
        entry["dice"] = report.leaf_dice[c].dice;
        entry["present"] = score.present;
        entry["included"] = score.included;
        per_class[score.class_id] = std::move(entry);
    }
    doc["per_class"] = std::move(per_class);

    doc["macro_f1"] = report.leaf_scores.macro_f1;
    json rank_macro;
    for (const auto& [rank, value] : report.per_rank_macro_f1) rank_macro[rank] = value;
    doc["per_rank_macro_f1"] = std::move(rank_macro);

    json coverage = json::array();
    for (const auto& pair : report.coverage) {
        json entry;
        entry["image"] = pair.image_id;
        entry["class"] = pair.class_id;
        entry["annotated"] = pair.annotated_fraction;
        entry["predicted"] = pair.predicted_fraction;
        coverage.push_back(std::move(entry));
    }
    doc["coverage"] = std::move(coverage);

    json regression;
    for (const auto& stats : report.regression) {
        json entry;
        entry["n"] = stats.n;
        entry["slope"] = optional_number(stats.slope);
        entry["intercept"] = optional_number(stats.intercept);
        entry["r2_fit"] = optional_number(stats.r2_fit);
        entry["r2_identity"] = optional_number(stats.r2_identity);
        entry["rmse"] = optional_number(stats.rmse);
        entry["flags"] = stats.flags;
        regression[stats.class_id] = std::move(entry);
    }
    doc["regression"] = std::move(regression);

    return doc.dump(2) + "\n";
}

std::string report_per_class_csv(const EvaluationReport& report) {
    std::string out =
        "class,f1,dice,precision,recall,tp,fp,fn,included,regression_n,slope,intercept,r2_fit,r2_identity,rmse\n";
    for (size_t c = 0; c < report.leaf_scores.per_class.size(); ++c) {
        const auto& score = report.leaf_scores.per_class[c];
        const auto& reg = report.regression[c];
        out += score.class_id;
        out += ',' + format_fraction(score.f1);
        out += ',' + format_fraction(report.leaf_dice[c].dice);
        out += ',' + format_fraction(score.precision);
        out += ',' + format_fraction(score.recall);
        out += ',' + std::to_string(score.tp);
        out += ',' + std::to_string(score.fp);
        out += ',' + std::to_string(score.fn);
        out += score.included ? ",1" : ",0";
        out += ',' + std::to_string(reg.n);
        auto cell = [&out](const std::optional<double>& v) {
            out += ',';
            if (v) out += format_fraction(*v);
        };
        cell(reg.slope);
        cell(reg.intercept);
        cell(reg.r2_fit);
        cell(reg.r2_identity);
        cell(reg.rmse);
        out += '\n';
    }
    return out;
}

std::string confusion_csv(const ConfusionMatrix& matrix) {
    std::string out = "annotated\\predicted";
    for (const auto& id : matrix.class_ids) out += ',' + id;
    out += '\n';
    const auto normalized = matrix.normalized();
    const int k = matrix.size();
    for (int row = 0; row < k; ++row) {
        out += matrix.class_ids[row];
        for (int col = 0; col < k; ++col)
            out += ',' + format_fraction(normalized[static_cast<size_t>(row) * k + col]);
        out += '\n';
    }
    return out;
}

}  // namespace taxoseg
