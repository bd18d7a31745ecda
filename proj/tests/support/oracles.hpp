#pragma once

// Brute-force reference implementations used only by tests. None of these
// share code paths with the library algorithms they check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordersketch/ontology.hpp"

namespace oracle {

using Adjacency = std::vector<std::vector<std::size_t>>;

inline Adjacency adjacency(const ordersketch::Ontology& o) {
    Adjacency adj(o.size());
    for (const auto& e : o.edges()) adj[e.child].push_back(e.parent);
    return adj;
}

/// Nodes reachable from `start` (including itself) by explicit DFS.
inline std::set<std::size_t> reachable(const Adjacency& adj, std::size_t start) {
    std::set<std::size_t> seen{start};
    std::vector<std::size_t> todo{start};
    while (!todo.empty()) {
        const auto v = todo.back();
        todo.pop_back();
        for (auto w : adj[v])
            if (seen.insert(w).second) todo.push_back(w);
    }
    return seen;
}

inline std::vector<std::set<std::size_t>> all_reachable(const Adjacency& adj) {
    std::vector<std::set<std::size_t>> out;
    for (std::size_t v = 0; v < adj.size(); ++v) out.push_back(reachable(adj, v));
    return out;
}

/// SCC labels by propagation to fixpoint: label(v) = min node index among
/// nodes that v reaches and that reach v back.
inline std::vector<std::size_t> scc_labels(const Adjacency& adj) {
    const std::size_t n = adj.size();
    // reach[v][w] by repeated relaxation
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
        reach[v][v] = true;
        for (auto w : adj[v]) reach[v][w] = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w)
                if (reach[v][w])
                    for (auto x : adj[w])
                        if (!reach[v][x]) reach[v][x] = changed = true;
    }
    std::vector<std::size_t> label(n);
    for (std::size_t v = 0; v < n; ++v) {
        label[v] = v;
        for (std::size_t w = 0; w < n; ++w)
            if (reach[v][w] && reach[w][v]) label[v] = std::min(label[v], w);
    }
    return label;
}

inline std::size_t nontrivial_scc_count(const Adjacency& adj) {
    const auto label = scc_labels(adj);
    std::vector<std::size_t> size(adj.size(), 0);
    for (auto l : label) ++size[l];
    return static_cast<std::size_t>(std::count_if(size.begin(), size.end(), [](auto s) { return s >= 2; }));
}

/// Dense 0/1 characteristic vector of `members` over a universe of size n.
inline std::vector<int> characteristic(const std::set<std::size_t>& members, std::size_t n) {
    std::vector<int> v(n, 0);
    for (auto m : members) v[m] = 1;
    return v;
}

inline long dense_dot(const std::vector<int>& a, const std::vector<int>& b) {
    long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::string node_name(std::size_t i) {
    std::string s = std::to_string(i);
    return "v" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
}

/// Random DAG: edges only from higher to lower index, each candidate pair
/// kept with probability p. Ids `v0000`... so index == id order.
inline ordersketch::Ontology random_dag(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(p);
    std::vector<ordersketch::Synset> synsets;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        synsets.push_back({node_name(i), {"lemma" + std::to_string(i)}});
        for (std::size_t j = 0; j < i; ++j)
            if (keep(rng)) edges.emplace_back(node_name(i), node_name(j));
    }
    return ordersketch::Ontology::from_parts(std::move(synsets), edges);
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half, by direct pair counting.
inline double mann_whitney_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    double wins = 0.0;
    for (double p : pos)
        for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace oracle
