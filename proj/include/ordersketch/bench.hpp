#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ordersketch/closure.hpp"
#include "ordersketch/dagify.hpp"
#include "ordersketch/ontology.hpp"
#include "ordersketch/random.hpp"
#include "ordersketch/sketch.hpp"

namespace ordersketch {

struct SyntheticConfig {
    std::size_t nodes = 0;
    std::size_t multi_lemma = 0;     ///< nodes carrying 2-4 lemmas
    std::size_t fanin_max = 2;       ///< parents per node, at most
    std::size_t cycle_injections = 0;
    std::uint64_t seed = 1;
};

/// Random forest-like is-a graph. Node i > 0 attaches to one uniformly drawn
/// earlier node, and to each further earlier node (up to fanin_max parents)
/// with probability 1/8. Multi-lemma nodes get 1-3 extra lemmas, each either
/// a fresh synonym or another node's primary lemma (a second sense). Every
/// cycle injection adds one back-edge from an ancestor one or two steps up.
inline Ontology gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.multi_lemma > cfg.nodes) throw std::invalid_argument("multi_lemma exceeds node count");
    if (cfg.fanin_max == 0 && cfg.nodes > 1) throw std::invalid_argument("fanin_max must be >= 1");
    const std::size_t n = cfg.nodes;
    const int width = static_cast<int>(std::to_string(n == 0 ? 0 : n - 1).size());
    auto padded = [&](char prefix, std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
        return std::string(buf);
    };

    Rng rng(cfg.seed);
    std::vector<Synset> synsets(n);
    std::vector<std::vector<NodeIndex>> parents(n);
    for (std::size_t i = 0; i < n; ++i) {
        synsets[i] = {padded('n', i), {padded('w', i)}};
        if (i == 0) continue;
        parents[i].push_back(static_cast<NodeIndex>(rng.below(i)));
        for (std::size_t extra = 1; extra < cfg.fanin_max && parents[i].size() < i; ++extra) {
            if (!rng.chance(1, 8)) continue;
            NodeIndex p;
            do {
                p = static_cast<NodeIndex>(rng.below(i));
            } while (std::find(parents[i].begin(), parents[i].end(), p) != parents[i].end());
            parents[i].push_back(p);
        }
    }

    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    for (std::size_t j = 0; j < cfg.multi_lemma; ++j) {
        std::swap(pick[j], pick[j + static_cast<std::size_t>(rng.below(n - j))]);
        const std::size_t i = pick[j];
        auto& lemmas = synsets[i].lemmas;
        const std::size_t extra = static_cast<std::size_t>(rng.between(1, 3));
        for (std::size_t e = 0; e < extra; ++e) {
            std::string lemma;
            if (n > 1 && rng.chance(1, 2)) {
                std::size_t other = static_cast<std::size_t>(rng.below(n - 1));
                if (other >= i) ++other;
                lemma = padded('w', other);
            } else {
                lemma = padded('w', i) + "_" + std::to_string(e);
            }
            if (std::find(lemmas.begin(), lemmas.end(), lemma) == lemmas.end()) lemmas.push_back(std::move(lemma));
        }
    }

    std::set<std::pair<NodeIndex, NodeIndex>> extra_edges;
    for (std::size_t c = 0; c < cfg.cycle_injections && n > 1; ++c) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            const auto u = static_cast<NodeIndex>(rng.between(1, n - 1));
            NodeIndex a = u;
            const std::size_t steps = static_cast<std::size_t>(rng.between(1, 2));
            for (std::size_t s = 0; s < steps && !parents[a].empty(); ++s)
                a = parents[a][static_cast<std::size_t>(rng.below(parents[a].size()))];
            if (a == u) continue;
            if (std::find(parents[a].begin(), parents[a].end(), u) != parents[a].end()) continue;
            if (extra_edges.emplace(a, u).second) break;
        }
    }

    // ids are zero-padded, so generation order is already id order
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (NodeIndex p : parents[i]) edges.push_back({static_cast<NodeIndex>(i), p});
    for (const auto& [a, u] : extra_edges) edges.push_back({a, u});
    return Ontology::from_indexed(std::move(synsets), std::move(edges));
}

/// Component timings for one (size, d) configuration, in seconds.
struct BenchReport {
    std::size_t nodes = 0;
    std::size_t multi_lemma = 0;
    std::size_t d = 0;
    std::size_t loops = 0;
    double hypernym_chains = 0.0;
    double loop_fixing = 0.0;
    double hashing = 0.0;
    double vectors = 0.0;
    double end_to_end = 0.0;
};

struct BenchConfig {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> dims;
    double multi_lemma_fraction = 0.2;
    std::uint64_t seed = 1;
    std::size_t repeats = 3;  ///< each timing is the minimum over repeats
};

namespace detail {

template <typename Fn>
double seconds(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Times the embedding pipeline single-threaded on synthetic graphs: loop
/// fixing, hypernym chains (upper sets plus lemma index), both hash
/// functions, vector creation, and end-to-end including serializing the
/// embedding. One cycle is injected per 2,000 nodes.
inline std::vector<BenchReport> run_bench(const BenchConfig& cfg) {
    std::vector<BenchReport> out;
    for (std::size_t n : cfg.sizes) {
        SyntheticConfig gen;
        gen.nodes = n;
        gen.multi_lemma = static_cast<std::size_t>(cfg.multi_lemma_fraction * static_cast<double>(n));
        gen.fanin_max = 2;
        gen.cycle_injections = n / 2000;
        gen.seed = cfg.seed ^ mix64(n);
        const Ontology raw = gen_synthetic(gen);

        for (std::size_t d : cfg.dims) {
            BenchReport best;
            best.nodes = n;
            best.multi_lemma = gen.multi_lemma;
            best.d = d;
            const HashSpec spec = HashSpec::derived(cfg.seed, d);
            for (std::size_t rep = 0; rep < std::max<std::size_t>(1, cfg.repeats); ++rep) {
                BenchReport cur = best;
                std::string serialized;
                cur.end_to_end = detail::seconds([&] {
                    Condensation cond;
                    UpperSetIndex index;
                    LemmaIndex lemmas;
                    NodeHashes hashes;
                    SketchEmbedding emb;
                    cur.loop_fixing = detail::seconds([&] { cond = condense(raw); });
                    cur.hypernym_chains = detail::seconds([&] {
                        index = compute_upper_sets(cond.dag);
                        lemmas = build_lemma_index(cond.dag);
                    });
                    cur.hashing = detail::seconds([&] { hashes = compute_node_hashes(cond.dag, spec); });
                    cur.vectors = detail::seconds([&] { emb = embed_all(cond.dag, index, lemmas, spec, hashes, 1); });
                    std::ostringstream buf;
                    write_embedding(buf, emb);
                    serialized = std::move(buf).str();
                    cur.loops = cond.map.loop_count;
                });
                if (rep == 0) {
                    best = cur;
                } else {
                    best.loop_fixing = std::min(best.loop_fixing, cur.loop_fixing);
                    best.hypernym_chains = std::min(best.hypernym_chains, cur.hypernym_chains);
                    best.hashing = std::min(best.hashing, cur.hashing);
                    best.vectors = std::min(best.vectors, cur.vectors);
                    best.end_to_end = std::min(best.end_to_end, cur.end_to_end);
                }
            }
            out.push_back(best);
        }
    }
    return out;
}

/// bench.tsv in the `synsets / component / secs` layout.
inline void write_bench_tsv(std::ostream& out, const std::vector<BenchReport>& reports) {
    auto row = [&](const BenchReport& r, const std::string& component, double secs) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", secs);
        out << r.nodes << '\t' << component << '\t' << buf << '\n';
    };
    out << "synsets\tcomponent\tsecs\n";
    for (const auto& r : reports) {
        row(r, "Hypernym chains", r.hypernym_chains);
        row(r, r.loops == 0 ? std::string("No loops seen") : "Fix " + std::to_string(r.loops) + " loops",
            r.loop_fixing);
        row(r, "Two hash functions", r.hashing);
        row(r, "Create vectors", r.vectors);
        row(r, "End-to-end d=" + std::to_string(r.d), r.end_to_end);
    }
}

}  // namespace ordersketch
