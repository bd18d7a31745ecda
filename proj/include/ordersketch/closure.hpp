#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ordersketch/ontology.hpp"

namespace ordersketch {

/// Reflexive upper sets: up(x) holds x and every transitive hypernym of x,
/// as ascending node indices.
class UpperSetIndex {
public:
    UpperSetIndex() = default;
    explicit UpperSetIndex(std::vector<std::vector<NodeIndex>> up) : up_(std::move(up)) {}

    std::size_t size() const noexcept { return up_.size(); }
    std::span<const NodeIndex> up(NodeIndex x) const { return up_.at(x); }
    /// N_x = |up(x)|
    std::size_t cardinality(NodeIndex x) const { return up_.at(x).size(); }

    bool contains(NodeIndex x, NodeIndex y) const {
        const auto& s = up_.at(x);
        return std::binary_search(s.begin(), s.end(), y);
    }

private:
    std::vector<std::vector<NodeIndex>> up_;
};

namespace detail {

/// Nodes ordered so that every node appears after all of its parents.
/// Throws OntologyError on a cycle.
inline std::vector<NodeIndex> parents_first_order(const Ontology& o) {
    const std::size_t n = o.size();
    std::vector<std::size_t> remaining(n);
    std::vector<std::vector<NodeIndex>> children(n);
    for (NodeIndex i = 0; i < n; ++i) remaining[i] = o.parents(i).size();
    for (const auto& e : o.edges()) children[e.parent].push_back(e.child);
    std::vector<NodeIndex> order;
    order.reserve(n);
    for (NodeIndex i = 0; i < n; ++i)
        if (remaining[i] == 0) order.push_back(i);
    for (std::size_t k = 0; k < order.size(); ++k)
        for (NodeIndex c : children[order[k]])
            if (--remaining[c] == 0) order.push_back(c);
    if (order.size() != n) throw OntologyError("not a DAG");
    return order;
}

inline void sorted_union_into(std::vector<NodeIndex>& acc, std::span<const NodeIndex> other,
                              std::vector<NodeIndex>& scratch) {
    scratch.clear();
    std::set_union(acc.begin(), acc.end(), other.begin(), other.end(), std::back_inserter(scratch));
    acc.swap(scratch);
}

}  // namespace detail

/// up(x) = {x} ∪ up(p) over direct parents p, memoized parents-first.
inline UpperSetIndex compute_upper_sets(const Ontology& dag) {
    const auto order = detail::parents_first_order(dag);
    std::vector<std::vector<NodeIndex>> up(dag.size());
    std::vector<NodeIndex> scratch;
    for (NodeIndex x : order) {
        auto& acc = up[x];
        acc.push_back(x);
        for (NodeIndex p : dag.parents(x)) detail::sorted_union_into(acc, up[p], scratch);
        acc.shrink_to_fit();
    }
    return UpperSetIndex(std::move(up));
}

/// Union of the upper sets of every sense of `lemma`.
inline std::vector<NodeIndex> lemma_upper_set(std::string_view lemma, const UpperSetIndex& index,
                                              const LemmaIndex& lemmas) {
    std::vector<NodeIndex> acc, scratch;
    for (NodeIndex s : lemmas.senses(lemma)) detail::sorted_union_into(acc, index.up(s), scratch);
    return acc;
}

/// Ground truth for x ⪯ y.
inline bool is_ancestor(NodeIndex x, NodeIndex y, const UpperSetIndex& index) {
    if (x >= index.size() || y >= index.size()) throw OntologyError("unknown node index");
    return index.contains(x, y);
}

inline bool is_ancestor(std::string_view x, std::string_view y, const Ontology& dag, const UpperSetIndex& index) {
    return is_ancestor(dag.index_of(x), dag.index_of(y), index);
}

}  // namespace ordersketch
