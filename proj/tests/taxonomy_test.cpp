// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "support/fixtures.hpp"
#include "taxoseg/taxonomy.hpp"

using namespace taxoseg;
using taxoseg::testing::random_tree;
using taxoseg::testing::three_leaf_source;
using taxoseg::testing::three_leaf_tree;

namespace {

bool has_violation(const std::vector<Violation>& violations, const std::string& code,
                   const std::string& id = "") {
    for (const auto& v : violations)
        if (v.code == code && (id.empty() || v.offending_id == id)) return true;
    return false;
}

}  // namespace

TEST_CASE("three-leaf fixture parses to six nodes with the declared binding") {
    auto tree = three_leaf_tree();
    CHECK(tree.node_count() == 6);
    CHECK(tree.channel_count() == 3);
    CHECK(tree.channel_binding() == std::vector<std::string>{"a1", "a2", "b1"});
    CHECK(validate_tree(tree).empty());
}

TEST_CASE("damage tree models the initial-damage/healthy hierarchy") {
    auto tree = taxoseg::testing::damage_tree();
    CHECK(tree.channel_count() == 6);
    CHECK(tree.ancestor_at_rank("initial", "status") == "status-damaged");
    CHECK(tree.ancestor_at_rank("healthy", "status") == "status-healthy");
    CHECK(tree.ancestor_at_rank("bleaching", "severity") == "sev-damage");
    CHECK(tree.ancestor_at_rank("necrosis", "severity") == "sev-damage");
    CHECK(tree.ancestor_at_rank("initial", "severity") == "sev-initial");
    // misc is its own class at every projection level
    CHECK(tree.ancestor_at_rank("misc", "severity") == "misc");
    CHECK(tree.ancestor_at_rank("misc", "status") == "misc");
}

TEST_CASE("missing parent is reported with the offending id") {
    auto src = three_leaf_source();
    src.nodes.push_back({"x", "x", "leaf", "nope"});
    src.channel_binding.push_back("x");
    auto violations = validate_taxonomy(src);
    CHECK(has_violation(violations, "missing-parent", "x"));
    CHECK_THROWS_AS(TaxonomyTree::compile(src), TaxonomyError);
    try {
        TaxonomyTree::compile(src);
    } catch (const TaxonomyError& e) {
        CHECK(std::string(e.what()).find("nope") != std::string::npos);
    }
}

TEST_CASE("validator flags duplicate ids, double bindings and rank inversions") {
    SUBCASE("duplicate id") {
        auto src = three_leaf_source();
        src.nodes.push_back({"a1", "again", "leaf", "B"});
        CHECK(has_violation(validate_taxonomy(src), "duplicate-id", "a1"));
    }
    SUBCASE("leaf bound to two channels") {
        auto src = three_leaf_source();
        src.channel_binding = {"a1", "a2", "b1", "a1"};
        CHECK(has_violation(validate_taxonomy(src), "binding-duplicate", "a1"));
    }
    SUBCASE("channel binding omitting a leaf") {
        auto src = three_leaf_source();
        src.channel_binding = {"a1", "b1"};
        CHECK(has_violation(validate_taxonomy(src), "binding-missing", "a2"));
    }
    SUBCASE("channel binding naming a non-leaf") {
        auto src = three_leaf_source();
        src.channel_binding = {"a1", "a2", "b1", "A"};
        CHECK(has_violation(validate_taxonomy(src), "binding-non-leaf", "A"));
    }
    SUBCASE("multiple roots") {
        auto src = three_leaf_source();
        src.nodes.push_back({"root2", "root2", "root", std::nullopt});
        CHECK(has_violation(validate_taxonomy(src), "multiple-roots"));
    }
    SUBCASE("rank ordering violation from swapped rank labels") {
        auto src = three_leaf_source();
        // Swap the rank labels of genus A and the root: the child now sits
        // above its parent.
        for (auto& n : src.nodes) {
            if (n.id == "A") n.rank = "root";
            if (n.id == "root") n.rank = "genus";
        }
        auto violations = validate_taxonomy(src);
        CHECK(has_violation(violations, "rank-order"));
    }
    SUBCASE("cycle") {
        TaxonomySource src;
        src.rank_order = {"leaf", "genus", "root"};
        src.nodes = {
            {"root", "root", "root", std::nullopt},
            {"A", "A", "genus", "B"},
            {"B", "B", "genus", "A"},
            {"a1", "a1", "leaf", "A"},
        };
        src.channel_binding = {"a1"};
        CHECK(has_violation(validate_taxonomy(src), "cycle"));
    }
    SUBCASE("well-formed tree has no violations") {
        CHECK(validate_taxonomy(three_leaf_source()).empty());
    }
}

TEST_CASE("ancestor_at_rank walks to the requested rank") {
    auto tree = three_leaf_tree();
    CHECK(tree.ancestor_at_rank("a1", "leaf") == "a1");
    CHECK(tree.ancestor_at_rank("a1", "genus") == "A");
    CHECK(tree.ancestor_at_rank("b1", "root") == "root");
    CHECK_THROWS_WITH_AS(tree.ancestor_at_rank("zz", "genus"),
                         doctest::Contains("unknown leaf"), Error);
    CHECK_THROWS_WITH_AS(tree.ancestor_at_rank("a1", "kingdom"),
                         doctest::Contains("unknown rank"), Error);
}

TEST_CASE("species file: Poaceae covers exactly the four grass weeds") {
    auto tree = taxoseg::testing::species_tree();
    CHECK(tree.channel_count() == 18);
    CHECK(tree.ancestor_at_rank("ECHCG", "family") == "Poaceae");
    CHECK(tree.leaves_under("Poaceae") == std::set<std::string>{"ECHCG", "ECHCO", "DIGSA", "SETVE"});
    CHECK(tree.leaves_under("Echinochloa") == std::set<std::string>{"ECHCG", "ECHCO"});
    // unknown leaves project to themselves below their attachment point
    CHECK(tree.ancestor_at_rank("other-broad", "genus") == "other-broad");
    CHECK(tree.ancestor_at_rank("other-broad", "group") == "broad-leaf");
    CHECK(tree.ancestor_at_rank("misc", "order") == "misc");
}

TEST_CASE("leaves_under covers singletons and the full root set") {
    auto tree = three_leaf_tree();
    CHECK(tree.leaves_under("A") == std::set<std::string>{"a1", "a2"});
    CHECK(tree.leaves_under("a1") == std::set<std::string>{"a1"});
    CHECK(tree.leaves_under("root") == std::set<std::string>{"a1", "a2", "b1"});
    CHECK_THROWS_AS(tree.leaves_under("nope"), Error);
}

TEST_CASE("sibling leaf sets partition the parent set") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        auto tree = random_tree(rng);
        for (int n = 0; n < tree.node_count(); ++n) {
            if (tree.is_leaf(n)) continue;
            const auto& children = tree.children_of(n);
            std::set<std::string> merged;
            size_t total = 0;
            for (int child : children) {
                auto leaves = tree.leaves_under(tree.node(child).id);
                total += leaves.size();
                merged.insert(leaves.begin(), leaves.end());
            }
            CHECK(merged == tree.leaves_under(tree.node(n).id));
            CHECK(total == merged.size());  // siblings are disjoint
        }
    }
}

TEST_CASE("every leaf projects to a unique node at every rank") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        auto tree = random_tree(rng);
        for (int c = 0; c < tree.channel_count(); ++c) {
            for (size_t r = 0; r < tree.rank_order().size(); ++r) {
                const int node = tree.ancestor_index_at_rank(c, static_cast<int>(r));
                REQUIRE(node >= 0);
                REQUIRE(node < tree.node_count());
            }
            CHECK(tree.ancestor_index_at_rank(c, 0) == tree.leaf_node_of_channel(c));
            const int last = static_cast<int>(tree.rank_order().size()) - 1;
            CHECK(tree.ancestor_index_at_rank(c, last) == tree.root_index());
        }
    }
}

TEST_CASE("parse-serialize round trip is the identity") {
    auto tree = taxoseg::testing::species_tree();
    const std::string text = serialize_taxonomy(tree);
    auto reparsed = parse_taxonomy(text);
    CHECK(serialize_taxonomy(reparsed) == text);
    CHECK(reparsed.channel_binding() == tree.channel_binding());
    CHECK(reparsed.rank_order() == tree.rank_order());
    CHECK(reparsed.node_count() == tree.node_count());
}

TEST_CASE("parse rejects malformed JSON and schema violations") {
    CHECK_THROWS_AS(parse_taxonomy("not json"), TaxonomyError);
    CHECK_THROWS_AS(parse_taxonomy("{}"), TaxonomyError);
    CHECK_THROWS_AS(parse_taxonomy(R"({"rank_order":["leaf","root"],"nodes":[],"channel_binding":[]})"),
                    TaxonomyError);
}
