#include <set>

#include <gtest/gtest.h>

#include "ordersketch/closure.hpp"
#include "support/oracles.hpp"

using namespace ordersketch;

namespace {

std::set<std::string> ids(const Ontology& o, std::span<const NodeIndex> nodes) {
    std::set<std::string> out;
    for (auto n : nodes) out.insert(o.id(n));
    return out;
}

Ontology chain() {
    return Ontology::from_parts({{"a", {"La"}}, {"b", {"Lb"}}, {"c", {"Lc"}}}, {{"a", "b"}, {"b", "c"}});
}

}  // namespace

TEST(UpperSets, Chain) {
    const auto o = chain();
    const auto idx = compute_upper_sets(o);
    EXPECT_EQ(ids(o, idx.up(o.index_of("a"))), (std::set<std::string>{"a", "b", "c"}));
    EXPECT_EQ(ids(o, idx.up(o.index_of("b"))), (std::set<std::string>{"b", "c"}));
    EXPECT_EQ(ids(o, idx.up(o.index_of("c"))), (std::set<std::string>{"c"}));
    EXPECT_EQ(idx.cardinality(o.index_of("a")), 3u);
}

TEST(UpperSets, DiamondCountsSharedAncestorOnce) {
    const auto o = Ontology::from_parts({{"a", {}}, {"b", {}}, {"c", {}}, {"d", {}}},
                                        {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
    const auto idx = compute_upper_sets(o);
    EXPECT_EQ(idx.cardinality(o.index_of("a")), 4u);
    EXPECT_EQ(ids(o, idx.up(o.index_of("a"))), (std::set<std::string>{"a", "b", "c", "d"}));
}

TEST(UpperSets, RejectsCycles) {
    const auto o = Ontology::from_parts({{"a", {}}, {"b", {}}}, {{"a", "b"}, {"b", "a"}});
    try {
        compute_upper_sets(o);
        FAIL();
    } catch (const OntologyError& e) {
        EXPECT_STREQ(e.what(), "not a DAG");
    }
}

TEST(UpperSets, MatchesDfsOracleOnRandomDags) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto o = oracle::random_dag(150, 0.03, seed);
        const auto idx = compute_upper_sets(o);
        const auto reach = oracle::all_reachable(oracle::adjacency(o));
        for (NodeIndex x = 0; x < o.size(); ++x) {
            const auto up = idx.up(x);
            EXPECT_TRUE(std::is_sorted(up.begin(), up.end()));
            EXPECT_EQ(std::set<std::size_t>(up.begin(), up.end()), reach[x]);
        }
    }
}

TEST(UpperSets, OrderLaws) {
    const auto o = oracle::random_dag(120, 0.04, 99);
    const auto idx = compute_upper_sets(o);
    const auto n = o.size();
    for (NodeIndex x = 0; x < n; ++x) {
        EXPECT_TRUE(idx.contains(x, x));
        const auto ux = idx.up(x);
        for (NodeIndex y = 0; y < n; ++y) {
            const auto uy = idx.up(y);
            const bool superset = std::includes(ux.begin(), ux.end(), uy.begin(), uy.end());
            // x ⪯ y iff up(x) ⊇ up(y)
            EXPECT_EQ(is_ancestor(x, y, idx), superset);
            if (is_ancestor(x, y, idx)) EXPECT_GE(idx.cardinality(x), idx.cardinality(y));
        }
        // transitivity
        for (NodeIndex y : ux) {
            const auto uy = idx.up(y);
            EXPECT_TRUE(std::includes(ux.begin(), ux.end(), uy.begin(), uy.end()));
        }
    }
}

TEST(UpperSets, IntersectionEqualsCharacteristicDot) {
    const auto o = oracle::random_dag(100, 0.05, 5);
    const auto idx = compute_upper_sets(o);
    std::vector<std::vector<int>> vec;
    for (NodeIndex x = 0; x < o.size(); ++x) {
        const auto up = idx.up(x);
        vec.push_back(oracle::characteristic({up.begin(), up.end()}, o.size()));
    }
    for (NodeIndex x = 0; x < o.size(); ++x)
        for (NodeIndex y = 0; y < o.size(); ++y) {
            std::vector<NodeIndex> common;
            const auto ux = idx.up(x), uy = idx.up(y);
            std::set_intersection(ux.begin(), ux.end(), uy.begin(), uy.end(), std::back_inserter(common));
            EXPECT_EQ(static_cast<long>(common.size()), oracle::dense_dot(vec[x], vec[y]));
        }
}

TEST(LemmaUpperSet, SingleSense) {
    const auto o = chain();
    const auto idx = compute_upper_sets(o);
    const auto lemmas = build_lemma_index(o);
    const auto up = lemma_upper_set("La", idx, lemmas);
    EXPECT_TRUE(std::ranges::equal(up, idx.up(o.index_of("a"))));
}

TEST(LemmaUpperSet, AbsorbedUnion) {
    const auto o = Ontology::from_parts({{"a", {"L"}}, {"b", {}}, {"c", {"L"}}}, {{"a", "b"}, {"b", "c"}});
    const auto idx = compute_upper_sets(o);
    const auto up = lemma_upper_set("L", idx, build_lemma_index(o));
    EXPECT_EQ(ids(o, up), (std::set<std::string>{"a", "b", "c"}));
}

TEST(LemmaUpperSet, DisjointBranchesMatchSetUnion) {
    // root <- left <- s1, root <- right <- s2
    const auto o = Ontology::from_parts(
        {{"root", {}}, {"left", {}}, {"right", {}}, {"s1", {"L"}}, {"s2", {"L"}}},
        {{"left", "root"}, {"right", "root"}, {"s1", "left"}, {"s2", "right"}});
    const auto idx = compute_upper_sets(o);
    const auto up = lemma_upper_set("L", idx, build_lemma_index(o));
    const auto adj = oracle::adjacency(o);
    auto expect = oracle::reachable(adj, o.index_of("s1"));
    expect.merge(oracle::reachable(adj, o.index_of("s2")));
    EXPECT_EQ(std::set<std::size_t>(up.begin(), up.end()), expect);
    EXPECT_EQ(up.size(), 3u + 3u - 1u);
}

TEST(LemmaUpperSet, UnknownLemma) {
    const auto o = chain();
    EXPECT_THROW(lemma_upper_set("nope", compute_upper_sets(o), build_lemma_index(o)), OntologyError);
}

TEST(IsAncestor, Chain) {
    const auto o = chain();
    const auto idx = compute_upper_sets(o);
    EXPECT_TRUE(is_ancestor("a", "c", o, idx));
    EXPECT_FALSE(is_ancestor("c", "a", o, idx));
    for (NodeIndex x = 0; x < o.size(); ++x) EXPECT_TRUE(is_ancestor(x, x, idx));
    EXPECT_THROW(is_ancestor("a", "zz", o, idx), OntologyError);
}
