#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ordersketch/bench.hpp"
#include "ordersketch/closure.hpp"
#include "ordersketch/dagify.hpp"
#include "ordersketch/eval.hpp"
#include "ordersketch/io.hpp"
#include "ordersketch/merge.hpp"
#include "ordersketch/ontology.hpp"
#include "ordersketch/sketch.hpp"

namespace ordersketch::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kUsageError = 2 };

inline constexpr std::uint64_t kDefaultSeed1 = 0x6f72646572736b31ULL;
inline constexpr std::uint64_t kDefaultSeed2 = 0x6f72646572736b32ULL;

/// Fully parsed command line. Paths that a subcommand does not use are
/// left empty.
struct RunConfig {
    std::string subcommand;

    std::filesystem::path nodes, edges, embedding, aux, stopwords;
    std::string out_prefix;
    std::filesystem::path out, out_scores, out_roc, out_summary;

    std::size_t dim = 100;
    std::uint64_t seed1 = kDefaultSeed1;
    std::uint64_t seed2 = kDefaultSeed2;
    std::uint64_t seed = 1;
    std::size_t negatives_k = 20;
    unsigned threads = 1;

    std::string x_key, y_key;
    double threshold = 0.5;
    bool direction_corrected = false;

    bool fold_plurals = false;
    bool depth1 = false;

    std::size_t gen_nodes = 0;
    std::size_t multi_lemma = 0;
    std::size_t fanin_max = 2;
    std::size_t cycles = 0;

    std::vector<std::size_t> dims;
    std::vector<std::size_t> sizes;
    double multi_lemma_fraction = 0.2;
    std::size_t repeats = 3;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

inline void require_input(const std::filesystem::path& p, const std::string& flag) {
    require(!p.empty(), "missing required flag " + flag);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) throw io::IoError("cannot read '" + p.string() + "' (" + flag + ")");
}

inline Ontology load_ontology(const std::filesystem::path& nodes, const std::filesystem::path& edges) {
    auto synsets = io::parse_file(nodes, [](std::istream& in) { return parse_nodes(in); });
    return io::parse_file(edges, [&](std::istream& in) { return parse_edges(in, std::move(synsets)); });
}

inline void check_dag(const Ontology& o) {
    if (!assert_acyclic(o)) throw OntologyError("not a DAG (run fix-loops first)");
}

inline std::string hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline int gen(const RunConfig& c, std::ostream& out) {
    require(!c.out_prefix.empty(), "missing required flag --out-prefix");
    require(c.multi_lemma <= c.gen_nodes, "--multi-lemma must not exceed --nodes");
    require(c.fanin_max >= 1, "--fanin-max must be >= 1");
    const auto o = gen_synthetic({c.gen_nodes, c.multi_lemma, c.fanin_max, c.cycles, c.seed});
    io::StagedOutputs files;
    write_nodes(files.add(c.out_prefix + "nodes.tsv"), o);
    write_edges(files.add(c.out_prefix + "edges.tsv"), o);
    files.commit();
    out << "command=gen nodes=" << o.size() << " edges=" << o.edges().size() << " seed=" << c.seed << '\n';
    return kSuccess;
}

inline int fix_loops(const RunConfig& c, std::ostream& out) {
    require_input(c.nodes, "--nodes");
    require_input(c.edges, "--edges");
    require(!c.out_prefix.empty(), "missing required flag --out-prefix");
    const auto o = load_ontology(c.nodes, c.edges);
    const auto cond = condense(o);
    io::StagedOutputs files;
    write_nodes(files.add(c.out_prefix + "nodes.tsv"), cond.dag);
    write_edges(files.add(c.out_prefix + "edges.tsv"), cond.dag);
    write_condensation_report(files.add(c.out_prefix + "condensation.tsv"), cond.map);
    files.commit();
    out << "command=fix-loops loops=" << cond.map.loop_count << " nodes_in=" << o.size()
        << " nodes_out=" << cond.dag.size() << " edges_out=" << cond.dag.edges().size() << '\n';
    return kSuccess;
}

inline int embed(const RunConfig& c, std::ostream& out) {
    require_input(c.nodes, "--nodes");
    require_input(c.edges, "--edges");
    require(!c.out.empty(), "missing required flag --out");
    require(c.dim >= 1, "--dim must be >= 1");
    const auto dag = load_ontology(c.nodes, c.edges);
    check_dag(dag);
    const auto index = compute_upper_sets(dag);
    const auto lemmas = build_lemma_index(dag);
    const auto emb = embed_all(dag, index, lemmas, HashSpec(c.seed1, c.seed2, c.dim), c.threads);
    io::StagedOutputs files;
    write_embedding(files.add(c.out), emb);
    files.commit();
    out << "command=embed d=" << c.dim << " seed1=" << hex(c.seed1) << " seed2=" << hex(c.seed2)
        << " synsets=" << dag.size() << " lemmas=" << lemmas.size() << " keys=" << emb.size() << '\n';
    return kSuccess;
}

inline int query(const RunConfig& c, std::ostream& out) {
    require_input(c.embedding, "--embedding");
    require(!c.x_key.empty(), "missing required flag --x");
    require(!c.y_key.empty(), "missing required flag --y");
    const auto emb = io::parse_file(c.embedding, [](std::istream& in) { return read_embedding(in); });
    const auto rule = c.direction_corrected ? DecisionRule::direction_corrected : DecisionRule::ratio;
    const bool decision = classify(c.x_key, c.y_key, emb, c.threshold, rule);
    const auto x = emb.row_of(c.x_key), y = emb.row_of(c.y_key);
    const auto xy = dot(emb.vector(x), emb.vector(y)), yy = dot(emb.vector(y), emb.vector(y));
    const std::string r = yy == 0 ? "degenerate" : ordersketch::detail::format_double(double(xy) / double(yy));
    out << "x=" << c.x_key << " y=" << c.y_key << " r=" << r
        << " r_hat=" << ordersketch::detail::format_double(double(xy) / double(emb.count(y)))
        << " direction_ok=" << (emb.count(y) < emb.count(x) ? "true" : "false")
        << " threshold=" << ordersketch::detail::format_double(c.threshold)
        << " rule=" << (c.direction_corrected ? "direction-corrected" : "ratio")
        << " decision=" << (decision ? "true" : "false") << '\n';
    return kSuccess;
}

inline int eval(const RunConfig& c, std::ostream& out) {
    require_input(c.nodes, "--nodes");
    require_input(c.edges, "--edges");
    require(c.negatives_k >= 1, "--negatives-k must be >= 1");
    require(c.dim >= 1, "--dim must be >= 1");
    const auto dag = load_ontology(c.nodes, c.edges);
    check_dag(dag);
    const auto index = compute_upper_sets(dag);
    const auto lemmas = build_lemma_index(dag);
    const auto emb = embed_all(dag, index, lemmas, HashSpec(c.seed1, c.seed2, c.dim), c.threads);
    auto pairs = generate_pairs(dag, index, lemmas, c.negatives_k, c.seed);
    const auto summary = evaluate(pairs.records, emb, c.threads);
    io::StagedOutputs files;
    if (!c.out_scores.empty()) write_scores_csv(files.add(c.out_scores), pairs.records);
    if (!c.out_roc.empty()) write_roc_csv(files.add(c.out_roc), summary.roc_points);
    if (!c.out_summary.empty()) write_summary_tsv(files.add(c.out_summary), summary, pairs.short_synsets);
    files.commit();
    using ordersketch::detail::format_double;
    out << "command=eval d=" << c.dim << " positives=" << summary.positives << " negatives=" << summary.negatives
        << " degenerate=" << summary.degenerate << " mean_abs_dev_pos=" << format_double(summary.mean_abs_dev_pos)
        << " mean_abs_dev_neg=" << format_double(summary.mean_abs_dev_neg)
        << " auroc=" << format_double(summary.auroc) << '\n';
    return kSuccess;
}

inline int sweep(const RunConfig& c, std::ostream& out) {
    require_input(c.nodes, "--nodes");
    require_input(c.edges, "--edges");
    require(!c.dims.empty(), "missing required flag --dims");
    require(!c.out.empty(), "missing required flag --out");
    for (auto d : c.dims) require(d >= 1, "--dims entries must be >= 1");
    const auto dag = load_ontology(c.nodes, c.edges);
    check_dag(dag);
    const auto index = compute_upper_sets(dag);
    const auto lemmas = build_lemma_index(dag);
    const auto points = sweep_dimension(dag, index, lemmas, c.dims, c.negatives_k, c.seed, c.threads);
    io::StagedOutputs files;
    write_sweep_csv(files.add(c.out), points);
    files.commit();
    out << "command=sweep points=" << points.size() << " seed=" << c.seed << '\n';
    return kSuccess;
}

inline int merge(const RunConfig& c, std::ostream& out) {
    require_input(c.nodes, "--source-nodes");
    require_input(c.edges, "--source-edges");
    require_input(c.aux, "--aux");
    if (!c.stopwords.empty()) require_input(c.stopwords, "--stopwords");
    require(!c.out_prefix.empty(), "missing required flag --out-prefix");
    const auto source = load_ontology(c.nodes, c.edges);
    const auto aux = io::parse_file(c.aux, [](std::istream& in) { return parse_aux(in); });
    const auto stop = c.stopwords.empty()
                          ? default_stopwords()
                          : io::parse_file(c.stopwords, [](std::istream& in) { return read_stopwords(in); });
    MergeOptions options;
    options.match = c.fold_plurals ? TokenMatch::fold_plural : TokenMatch::exact;
    const auto merged = merge_ontologies(source, aux, stop, options);
    io::StagedOutputs files;
    write_nodes(files.add(c.out_prefix + "nodes.tsv"), merged.ontology);
    write_merge_report(files.add(c.out_prefix + "merge_report.tsv"), merged.records);
    std::size_t depth1_nodes = 0;
    if (c.depth1) {
        const auto forest = depth1_hypernyms(aux);
        depth1_nodes = forest.size();
        write_nodes(files.add(c.out_prefix + "depth1_nodes.tsv"), forest);
        write_edges(files.add(c.out_prefix + "depth1_edges.tsv"), forest);
    }
    files.commit();
    out << "command=merge synsets=" << merged.ontology.size() << " aux=" << aux.size()
        << " matched_synsets=" << merged.records.size();
    if (c.depth1) out << " depth1_nodes=" << depth1_nodes;
    out << '\n';
    return kSuccess;
}

inline int bench(const RunConfig& c, std::ostream& out) {
    require(!c.sizes.empty(), "missing required flag --sizes");
    require(!c.dims.empty(), "missing required flag --dims");
    require(!c.out.empty(), "missing required flag --out");
    require(c.multi_lemma_fraction >= 0.0 && c.multi_lemma_fraction <= 1.0,
            "--multi-lemma-fraction must be in [0, 1]");
    for (auto d : c.dims) require(d >= 1, "--dims entries must be >= 1");
    BenchConfig cfg{c.sizes, c.dims, c.multi_lemma_fraction, c.seed, c.repeats};
    const auto reports = run_bench(cfg);
    io::StagedOutputs files;
    write_bench_tsv(files.add(c.out), reports);
    files.commit();
    out << "command=bench configurations=" << reports.size() << '\n';
    return kSuccess;
}

}  // namespace detail

/// Executes one subcommand. Prints a key=value summary line on `out` and
/// diagnostics on `err`. Outputs are only written when the whole pipeline
/// succeeded.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (c.subcommand == "gen") return detail::gen(c, out);
        if (c.subcommand == "fix-loops") return detail::fix_loops(c, out);
        if (c.subcommand == "embed") return detail::embed(c, out);
        if (c.subcommand == "query") return detail::query(c, out);
        if (c.subcommand == "eval") return detail::eval(c, out);
        if (c.subcommand == "sweep") return detail::sweep(c, out);
        if (c.subcommand == "merge") return detail::merge(c, out);
        if (c.subcommand == "bench") return detail::bench(c, out);
        err << "error: unknown subcommand '" << c.subcommand << "'\n";
        return kUsageError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace ordersketch::cli
