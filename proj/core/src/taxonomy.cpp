// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/taxonomy.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

namespace taxoseg {
namespace {

using nlohmann::json;

int find_rank(const std::vector<std::string>& rank_order, const std::string& rank) {
    auto it = std::find(rank_order.begin(), rank_order.end(), rank);
    return it == rank_order.end() ? -1 : static_cast<int>(it - rank_order.begin());
}

std::string join_violations(const std::vector<Violation>& violations) {
    std::ostringstream out;
    out << "invalid taxonomy (" << violations.size() << " violation"
        << (violations.size() == 1 ? "" : "s") << "):";
    for (const auto& v : violations) out << "\n  [" << v.code << "] " << v.message;
    return out.str();
}

}  // namespace

std::vector<Violation> validate_taxonomy(const TaxonomySource& src) {
    std::vector<Violation> out;
    auto add = [&out](std::string code, std::string id, std::string message) {
        out.push_back({std::move(code), std::move(id), std::move(message)});
    };

    if (src.rank_order.empty()) {
        add("empty-rank-order", "", "rank_order must list at least leaf and root");
        return out;
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& r : src.rank_order)
            if (!seen.insert(r).second) add("duplicate-rank", r, "rank '" + r + "' declared twice");
    }

    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < src.nodes.size(); ++i) {
        const auto& n = src.nodes[i];
        if (!index.emplace(n.id, static_cast<int>(i)).second)
            add("duplicate-id", n.id, "node id '" + n.id + "' declared twice");
    }

    int roots = 0;
    for (const auto& n : src.nodes) {
        if (find_rank(src.rank_order, n.rank) < 0)
            add("unknown-rank", n.id, "node '" + n.id + "' uses undeclared rank '" + n.rank + "'");
        if (!n.parent_id) {
            ++roots;
            if (find_rank(src.rank_order, n.rank) >= 0 && n.rank != src.rank_order.back())
                add("root-rank", n.id, "root '" + n.id + "' must have rank '" + src.rank_order.back() + "'");
        } else if (!index.count(*n.parent_id)) {
            add("missing-parent", n.id, "node '" + n.id + "' lists missing parent '" + *n.parent_id + "'");
        }
    }
    if (roots == 0 && !src.nodes.empty()) add("no-root", "", "no node without a parent");
    if (roots > 1) add("multiple-roots", "", std::to_string(roots) + " nodes without a parent");

    // Rank must strictly increase in generality along every child->parent edge.
    for (const auto& n : src.nodes) {
        if (!n.parent_id || !index.count(*n.parent_id)) continue;
        const auto& p = src.nodes[index.at(*n.parent_id)];
        int rc = find_rank(src.rank_order, n.rank);
        int rp = find_rank(src.rank_order, p.rank);
        if (rc >= 0 && rp >= 0 && rc >= rp)
            add("rank-order", n.id,
                "node '" + n.id + "' (rank " + n.rank + ") not below parent '" + p.id + "' (rank " + p.rank + ")");
    }

    // Cycle check over parent pointers. 0 = unvisited, 1 = in progress, 2 = done.
    {
        std::vector<int> state(src.nodes.size(), 0);
        for (size_t i = 0; i < src.nodes.size(); ++i) {
            size_t cur = i;
            std::vector<size_t> path;
            while (state[cur] == 0) {
                state[cur] = 1;
                path.push_back(cur);
                const auto& n = src.nodes[cur];
                if (!n.parent_id || !index.count(*n.parent_id)) break;
                cur = static_cast<size_t>(index.at(*n.parent_id));
                if (state[cur] == 1) {
                    add("cycle", src.nodes[cur].id, "parent chain through '" + src.nodes[cur].id + "' forms a cycle");
                    break;
                }
            }
            for (size_t p : path) state[p] = 2;
        }
    }

    // Channel binding must cover each leaf exactly once, nothing else.
    const std::string leaf_rank = src.rank_order.front();
    std::unordered_set<std::string> leaves;
    for (const auto& n : src.nodes)
        if (n.rank == leaf_rank) leaves.insert(n.id);

    std::unordered_set<std::string> bound;
    for (const auto& id : src.channel_binding) {
        if (!index.count(id)) {
            add("binding-unknown", id, "channel_binding entry '" + id + "' is not a declared node");
            continue;
        }
        if (!leaves.count(id))
            add("binding-non-leaf", id, "channel_binding entry '" + id + "' is not a leaf");
        if (!bound.insert(id).second)
            add("binding-duplicate", id, "leaf '" + id + "' bound to two channels");
    }
    for (const auto& leaf : leaves)
        if (!bound.count(leaf)) add("binding-missing", leaf, "leaf '" + leaf + "' has no channel binding");

    // LabelMask stores channel indices in 8 bits with 255 reserved for ignore.
    if (src.channel_binding.size() > 255)
        add("too-many-leaves", "", "more than 255 leaves cannot be encoded in an 8-bit mask");

    // Every internal node needs a leaf below it, otherwise the recursive
    // descent could reach a subtree with no class to choose.
    {
        std::unordered_set<std::string> has_leaf;
        for (const auto& n : src.nodes) {
            if (n.rank != leaf_rank) continue;
            const TaxonNode* cur = &n;
            while (true) {
                has_leaf.insert(cur->id);
                if (!cur->parent_id || !index.count(*cur->parent_id)) break;
                const TaxonNode* next = &src.nodes[index.at(*cur->parent_id)];
                if (has_leaf.count(next->id)) break;
                cur = next;
            }
        }
        for (const auto& n : src.nodes)
            if (n.rank != leaf_rank && !has_leaf.count(n.id))
                add("barren-node", n.id, "internal node '" + n.id + "' has no leaf descendant");
    }

    if (src.misc && !leaves.count(*src.misc))
        add("misc-not-leaf", *src.misc, "misc '" + *src.misc + "' is not a declared leaf");
    for (const auto& u : src.unknown)
        if (!leaves.count(u)) add("unknown-not-leaf", u, "unknown entry '" + u + "' is not a declared leaf");

    return out;
}

TaxonomyTree TaxonomyTree::compile(TaxonomySource source) {
    auto violations = validate_taxonomy(source);
    if (!violations.empty()) throw TaxonomyError(join_violations(violations), std::move(violations));

    TaxonomyTree t;
    t.src_ = std::move(source);
    t.nodes_ = t.src_.nodes;
    t.rank_count_ = static_cast<int>(t.src_.rank_order.size());

    for (size_t i = 0; i < t.nodes_.size(); ++i) t.index_.emplace(t.nodes_[i].id, static_cast<int>(i));

    const int n = t.node_count();
    t.parents_.assign(n, -1);
    t.children_.assign(n, {});
    t.node_rank_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const auto& node = t.nodes_[i];
        t.node_rank_[i] = find_rank(t.src_.rank_order, node.rank);
        if (node.parent_id) {
            int p = t.index_.at(*node.parent_id);
            t.parents_[i] = p;
            t.children_[p].push_back(i);
        } else {
            t.root_ = i;
        }
    }

    const int channels = t.channel_count();
    t.channel_node_.resize(channels);
    for (int c = 0; c < channels; ++c) t.channel_node_[c] = t.index_.at(t.src_.channel_binding[c]);

    t.node_channels_.assign(n, {});
    for (int c = 0; c < channels; ++c) {
        for (int cur = t.channel_node_[c]; cur != -1; cur = t.parents_[cur])
            t.node_channels_[cur].push_back(c);
    }
    for (auto& chans : t.node_channels_) std::sort(chans.begin(), chans.end());

    // Projection table: most general path node whose rank index <= target.
    t.projection_.assign(static_cast<size_t>(channels) * t.rank_count_, -1);
    for (int c = 0; c < channels; ++c) {
        for (int r = 0; r < t.rank_count_; ++r) {
            int cur = t.channel_node_[c];
            while (t.parents_[cur] != -1 && t.node_rank_[t.parents_[cur]] <= r) cur = t.parents_[cur];
            t.projection_[static_cast<size_t>(c) * t.rank_count_ + r] = cur;
        }
    }

    t.unknown_ = std::set<std::string>(t.src_.unknown.begin(), t.src_.unknown.end());
    t.unknown_channel_.assign(channels, false);
    for (int c = 0; c < channels; ++c)
        if (t.unknown_.count(t.src_.channel_binding[c])) t.unknown_channel_[c] = true;
    if (t.src_.misc) t.misc_channel_ = t.channel_of_leaf(*t.src_.misc);
    return t;
}

int TaxonomyTree::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

int TaxonomyTree::rank_index(const std::string& rank) const {
    return find_rank(src_.rank_order, rank);
}

int TaxonomyTree::channel_of_leaf(const std::string& leaf_id) const {
    for (int c = 0; c < channel_count(); ++c)
        if (src_.channel_binding[c] == leaf_id) return c;
    return -1;
}

const std::string& TaxonomyTree::ancestor_at_rank(const std::string& leaf_id, const std::string& rank) const {
    int channel = channel_of_leaf(leaf_id);
    if (channel < 0) throw Error("ancestor_at_rank: unknown leaf '" + leaf_id + "'");
    int r = rank_index(rank);
    if (r < 0) throw Error("ancestor_at_rank: unknown rank '" + rank + "'");
    return nodes_[ancestor_index_at_rank(channel, r)].id;
}

std::set<std::string> TaxonomyTree::leaves_under(const std::string& node_id) const {
    int idx = index_of(node_id);
    if (idx < 0) throw Error("leaves_under: unknown node '" + node_id + "'");
    std::set<std::string> out;
    for (int c : node_channels_[idx]) out.insert(src_.channel_binding[c]);
    return out;
}

std::vector<Violation> validate_tree(const TaxonomyTree& tree) {
    return validate_taxonomy(tree.source());
}

TaxonomyTree parse_taxonomy(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw TaxonomyError(std::string("taxonomy file is not valid JSON: ") + e.what(), {});
    }

    TaxonomySource src;
    try {
        src.rank_order = doc.at("rank_order").get<std::vector<std::string>>();
        for (const auto& jn : doc.at("nodes")) {
            TaxonNode n;
            n.id = jn.at("id").get<std::string>();
            n.display_name = jn.value("display_name", n.id);
            n.rank = jn.at("rank").get<std::string>();
            if (jn.contains("parent") && !jn.at("parent").is_null())
                n.parent_id = jn.at("parent").get<std::string>();
            src.nodes.push_back(std::move(n));
        }
        src.channel_binding = doc.at("channel_binding").get<std::vector<std::string>>();
        if (doc.contains("misc") && !doc.at("misc").is_null())
            src.misc = doc.at("misc").get<std::string>();
        if (doc.contains("unknown"))
            src.unknown = doc.at("unknown").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw TaxonomyError(std::string("taxonomy file schema error: ") + e.what(), {});
    }
    return TaxonomyTree::compile(std::move(src));
}

std::string serialize_taxonomy(const TaxonomyTree& tree) {
    const auto& src = tree.source();
    json doc;
    doc["rank_order"] = src.rank_order;
    json nodes = json::array();
    for (const auto& n : src.nodes) {
        json jn;
        jn["id"] = n.id;
        jn["display_name"] = n.display_name;
        jn["rank"] = n.rank;
        jn["parent"] = n.parent_id ? json(*n.parent_id) : json(nullptr);
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);
    doc["channel_binding"] = src.channel_binding;
    doc["misc"] = src.misc ? json(*src.misc) : json(nullptr);
    doc["unknown"] = src.unknown;
    return doc.dump(2) + "\n";
}

RankView make_rank_view(const TaxonomyTree& tree, int rank_index) {
    if (rank_index < 0 || rank_index >= static_cast<int>(tree.rank_order().size()))
        throw Error("make_rank_view: rank index out of range");
    RankView view;
    view.rank_index = rank_index;
    view.channel_to_class.resize(tree.channel_count());
    std::unordered_map<int, int> position;
    for (int c = 0; c < tree.channel_count(); ++c) {
        int node = tree.ancestor_index_at_rank(c, rank_index);
        auto [it, inserted] = position.emplace(node, static_cast<int>(view.class_nodes.size()));
        if (inserted) view.class_nodes.push_back(node);
        view.channel_to_class[c] = it->second;
    }
    return view;
}

}  // namespace taxoseg
