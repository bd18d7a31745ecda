#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ordersketch/ontology.hpp"

namespace ordersketch {

/// Result of collapsing strongly connected components.
struct CondensationMap {
    /// original node id -> merged node id (total)
    std::map<std::string, std::string, std::less<>> original_to_merged;
    /// merged node id -> sorted original member ids
    std::map<std::string, std::vector<std::string>, std::less<>> merged_members;
    /// number of components with two or more members
    std::size_t loop_count = 0;
};

struct Condensation {
    Ontology dag;
    CondensationMap map;
};

/// Strongly connected components of the is-a graph, one component id per
/// node. Iterative Tarjan so half-million node inputs do not overflow the
/// call stack. Component ids come out in reverse topological order.
inline std::vector<std::size_t> strongly_connected_components(const Ontology& o, std::size_t* component_count = nullptr) {
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = o.size();
    std::vector<std::size_t> order(n, unvisited), low(n, 0), component(n, unvisited);
    std::vector<NodeIndex> stack;
    std::vector<bool> on_stack(n, false);
    // (node, next parent position)
    std::vector<std::pair<NodeIndex, std::size_t>> frames;
    std::size_t counter = 0, components = 0;

    for (NodeIndex root = 0; root < n; ++root) {
        if (order[root] != unvisited) continue;
        frames.push_back({root, 0});
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            const auto parents = o.parents(v);
            if (next < parents.size()) {
                const NodeIndex w = parents[next++];
                if (order[w] == unvisited) {
                    order[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], order[w]);
                }
                continue;
            }
            const NodeIndex done = v;
            frames.pop_back();
            if (!frames.empty()) {
                const NodeIndex caller = frames.back().first;
                low[caller] = std::min(low[caller], low[done]);
            }
            if (low[done] == order[done]) {
                NodeIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component[w] = components;
                } while (w != done);
                ++components;
            }
        }
    }
    if (component_count) *component_count = components;
    return component;
}

/// True iff the graph admits a complete topological order (Kahn).
inline bool assert_acyclic(const Ontology& o) {
    const std::size_t n = o.size();
    std::vector<std::size_t> pending(n, 0);  // unprocessed children per node
    for (const auto& e : o.edges()) ++pending[e.parent];
    std::vector<NodeIndex> ready;
    for (NodeIndex i = 0; i < n; ++i)
        if (pending[i] == 0) ready.push_back(i);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const NodeIndex v = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeIndex p : o.parents(v))
            if (--pending[p] == 0) ready.push_back(p);
    }
    return seen == n;
}

/// Collapses every strongly connected component into one synset whose id is
/// the smallest member id. Members' lemmas are unioned, deduplicated and
/// sorted; singleton components keep their lemma list untouched.
inline Condensation condense(const Ontology& o) {
    std::size_t count = 0;
    const auto component = strongly_connected_components(o, &count);

    std::vector<std::vector<NodeIndex>> members(count);
    for (NodeIndex i = 0; i < o.size(); ++i) members[component[i]].push_back(i);

    Condensation out;
    std::vector<Synset> synsets;
    synsets.reserve(count);
    for (auto& group : members) {
        // indices ascend with ids, so group.front() is the smallest id
        const auto& head = o.synset(group.front());
        Synset merged{head.id, head.lemmas};
        std::vector<std::string> ids;
        for (NodeIndex m : group) {
            ids.push_back(o.id(m));
            out.map.original_to_merged.emplace(o.id(m), head.id);
        }
        if (group.size() > 1) {
            ++out.map.loop_count;
            for (std::size_t k = 1; k < group.size(); ++k)
                for (const auto& lemma : o.synset(group[k]).lemmas) merged.lemmas.push_back(lemma);
            std::sort(merged.lemmas.begin(), merged.lemmas.end());
            merged.lemmas.erase(std::unique(merged.lemmas.begin(), merged.lemmas.end()), merged.lemmas.end());
        }
        out.map.merged_members.emplace(head.id, std::move(ids));
        synsets.push_back(std::move(merged));
    }

    // Merged synsets sort in the same relative order as their heads, so the
    // new index of component c is the rank of its head among all heads.
    std::vector<NodeIndex> head_of(count);
    for (std::size_t c = 0; c < count; ++c) head_of[c] = members[c].front();
    std::vector<std::size_t> by_head(count);
    for (std::size_t c = 0; c < count; ++c) by_head[c] = c;
    std::sort(by_head.begin(), by_head.end(), [&](auto a, auto b) { return head_of[a] < head_of[b]; });
    std::vector<NodeIndex> new_index(count);
    for (std::size_t r = 0; r < count; ++r) new_index[by_head[r]] = static_cast<NodeIndex>(r);

    std::vector<Edge> edges;
    edges.reserve(o.edges().size());
    for (const auto& e : o.edges()) {
        const auto c = new_index[component[e.child]];
        const auto p = new_index[component[e.parent]];
        if (c != p) edges.push_back({c, p});
    }
    out.dag = Ontology::from_indexed(std::move(synsets), std::move(edges));
    return out;
}

/// Condensation report: `<merged_id>\t<member1>|<member2>|...` for
/// nontrivial components only.
inline void write_condensation_report(std::ostream& out, const CondensationMap& map) {
    for (const auto& [merged, members] : map.merged_members) {
        if (members.size() < 2) continue;
        out << merged << '\t';
        detail::join_to(out, members, '|');
        out << '\n';
    }
}

}  // namespace ordersketch
