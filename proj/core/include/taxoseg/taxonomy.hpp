// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TAXONOMY_HPP
#define TAXOSEG_TAXONOMY_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxoseg/error.hpp"

namespace taxoseg {

struct TaxonNode {
    std::string id;            // unique, e.g. an EPPO code ("ECHCG") or "necrosis"
    std::string display_name;
    std::string rank;          // one of the file's declared rank names
    std::optional<std::string> parent_id;  // absent for the root only
};

// Raw taxonomy content as declared in a taxonomy file, prior to validation.
// Mirrors the JSON schema one to one so files round-trip.
struct TaxonomySource {
    std::vector<std::string> rank_order;       // leaf-first, root-last
    std::vector<TaxonNode> nodes;              // declaration order preserved
    std::vector<std::string> channel_binding;  // leaf ids; position i = channel i
    std::optional<std::string> misc;           // catch-all leaf, when declared
    std::vector<std::string> unknown;          // leaves flagged unknown (other-*)
};

struct Violation {
    std::string code;          // stable machine-readable tag, e.g. "duplicate-id"
    std::string offending_id;  // node/rank/channel id the violation points at
    std::string message;
};

class TaxonomyError : public Error {
public:
    TaxonomyError(std::string what, std::vector<Violation> violations)
        : Error(std::move(what)), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

// Immutable after construction; safe for concurrent reads.
class TaxonomyTree {
public:
    // Structural queries -----------------------------------------------------

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const TaxonNode& node(int index) const { return nodes_[index]; }
    int index_of(const std::string& id) const;  // -1 when absent
    int root_index() const { return root_; }

    const std::vector<std::string>& rank_order() const { return src_.rank_order; }
    int rank_index(const std::string& rank) const;  // -1 when absent
    int node_rank_index(int node_index) const { return node_rank_[node_index]; }

    int parent_of(int node_index) const { return parents_[node_index]; }  // -1 for root
    const std::vector<int>& children_of(int node_index) const { return children_[node_index]; }
    bool is_leaf(int node_index) const { return node_rank_[node_index] == 0; }

    // Channel layer -----------------------------------------------------------

    int channel_count() const { return static_cast<int>(src_.channel_binding.size()); }
    const std::vector<std::string>& channel_binding() const { return src_.channel_binding; }
    int channel_of_leaf(const std::string& leaf_id) const;  // -1 when absent
    int leaf_node_of_channel(int channel) const { return channel_node_[channel]; }

    // Sorted leaf channels below a node; for a leaf, its own channel.
    const std::vector<int>& channels_under(int node_index) const { return node_channels_[node_index]; }
    // Lowest channel index below a node; the deterministic tie-break key.
    int first_channel_under(int node_index) const { return node_channels_[node_index].front(); }

    std::optional<int> misc_channel() const { return misc_channel_; }
    const std::set<std::string>& unknown_leaf_ids() const { return unknown_; }
    bool is_unknown_channel(int channel) const { return unknown_channel_[channel]; }

    // Rank projection ---------------------------------------------------------

    // The node a leaf projects to at a rank: the most general node on the
    // leaf-to-root path whose rank does not exceed `rank`. Leaves attached
    // above missing ranks (misc, other-*) therefore project to themselves
    // until the path reaches a declared ancestor.
    int ancestor_index_at_rank(int leaf_channel, int rank_index) const {
        return projection_[static_cast<size_t>(leaf_channel) * rank_count_ + rank_index];
    }
    const std::string& ancestor_at_rank(const std::string& leaf_id, const std::string& rank) const;

    std::set<std::string> leaves_under(const std::string& node_id) const;

    const TaxonomySource& source() const { return src_; }

    // Builds a tree from raw content; throws TaxonomyError listing every
    // violation when the content does not satisfy the invariants.
    static TaxonomyTree compile(TaxonomySource source);

private:
    TaxonomyTree() = default;

    TaxonomySource src_;
    std::vector<TaxonNode> nodes_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<int> node_rank_;
    std::vector<int> channel_node_;
    std::vector<std::vector<int>> node_channels_;
    std::vector<int> projection_;  // [channel][rank] -> node index
    std::vector<bool> unknown_channel_;
    std::set<std::string> unknown_;
    std::optional<int> misc_channel_;
    int root_ = -1;
    int rank_count_ = 0;
};

// Checks every invariant of the taxonomy schema. Total: never throws; an
// empty result means the content compiles.
std::vector<Violation> validate_taxonomy(const TaxonomySource& source);

// Re-validates the source a tree was compiled from (always empty for trees
// produced by compile/parse; exposed so callers can audit fixtures).
std::vector<Violation> validate_tree(const TaxonomyTree& tree);

// JSON taxonomy file <-> tree. parse(serialize(t)) reproduces t.
TaxonomyTree parse_taxonomy(std::string_view json_text);
std::string serialize_taxonomy(const TaxonomyTree& tree);

// Class list of a confusion matrix / prediction table at one rank: the
// distinct projections of all channels, ordered by first channel occurrence.
struct RankView {
    int rank_index = 0;
    std::vector<int> class_nodes;       // node indices, one per rank class
    std::vector<int> channel_to_class;  // channel -> position in class_nodes
};
RankView make_rank_view(const TaxonomyTree& tree, int rank_index);

}  // namespace taxoseg

#endif
