#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "ordersketch/cli.hpp"

namespace {

using ordersketch::cli::RunConfig;

std::uint64_t parse_seed(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
    return v;
}

void add_seed(CLI::App* cmd, const std::string& flag, std::uint64_t& target, const std::string& help) {
    cmd->add_option_function<std::string>(
           flag, [&target](const std::string& s) { target = parse_seed(s); }, help)
        ->check([](const std::string& s) {
            try {
                parse_seed(s);
                return std::string();
            } catch (const std::exception&) {
                return "not a decimal or 0x-prefixed hex integer: " + s;
            }
        });
}

void add_ontology_inputs(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--nodes", c.nodes, "nodes.tsv")->required();
    cmd->add_option("--edges", c.edges, "edges.tsv")->required();
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"ordersketch: order embeddings of ontologies via upper sets and countsketch"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a seeded synthetic ontology");
    gen->add_option("--nodes", c.gen_nodes, "Number of synsets")->required();
    gen->add_option("--multi-lemma", c.multi_lemma, "Synsets carrying 2-4 lemmas");
    gen->add_option("--fanin-max", c.fanin_max, "Maximum parents per synset")->check(CLI::PositiveNumber);
    gen->add_option("--cycles", c.cycles, "Back-edges injected to create loops");
    add_seed(gen, "--seed", c.seed, "RNG seed");
    gen->add_option("--out-prefix", c.out_prefix, "Writes <prefix>nodes.tsv and <prefix>edges.tsv")->required();

    auto* fix = app.add_subcommand("fix-loops", "Merge strongly connected components into single synsets");
    add_ontology_inputs(fix, c);
    fix->add_option("--out-prefix", c.out_prefix, "Writes nodes.tsv, edges.tsv and condensation.tsv")->required();

    auto* embed = app.add_subcommand("embed", "Sketch every synset and lemma");
    add_ontology_inputs(embed, c);
    embed->add_option("--dim", c.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    add_seed(embed, "--seed1", c.seed1, "Bucket hash seed");
    add_seed(embed, "--seed2", c.seed2, "Sign hash seed");
    embed->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    embed->add_option("--out", c.out, "Embedding TSV")->required();

    auto* query = app.add_subcommand("query", "Score one x ⪯ y query");
    query->add_option("--embedding", c.embedding, "Embedding TSV")->required();
    query->add_option("--x", c.x_key, "Namespaced key (s:<id> or l:<lemma>)")->required();
    query->add_option("--y", c.y_key, "Namespaced key (s:<id> or l:<lemma>)")->required();
    query->add_option("--threshold", c.threshold, "Decision threshold");
    query->add_flag("--direction-corrected", c.direction_corrected, "Use r_hat and the N_y < N_x check");

    auto* eval = app.add_subcommand("eval", "Positive/negative pair evaluation with ROC");
    add_ontology_inputs(eval, c);
    eval->add_option("--dim", c.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    add_seed(eval, "--seed1", c.seed1, "Bucket hash seed");
    add_seed(eval, "--seed2", c.seed2, "Sign hash seed");
    eval->add_option("--negatives-k", c.negatives_k, "Random negative lemmas per synset")->check(CLI::PositiveNumber);
    add_seed(eval, "--seed", c.seed, "Negative sampling seed");
    eval->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    eval->add_option("--out-scores", c.out_scores, "scores.csv");
    eval->add_option("--out-roc", c.out_roc, "roc.csv");
    eval->add_option("--out-summary", c.out_summary, "summary.tsv");

    auto* sweep = app.add_subcommand("sweep", "AUROC as a function of embedding dimension");
    add_ontology_inputs(sweep, c);
    sweep->add_option("--dims", c.dims, "Dimensions, comma separated")->delimiter(',')->required();
    sweep->add_option("--negatives-k", c.negatives_k, "Random negative lemmas per synset")->check(CLI::PositiveNumber);
    add_seed(sweep, "--seed", c.seed, "Base seed for sampling and hashing");
    sweep->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", c.out, "sweep.csv")->required();

    auto* merge = app.add_subcommand("merge", "Augment synsets with validated auxiliary concepts");
    merge->add_option("--source-nodes", c.nodes, "Source nodes.tsv")->required();
    merge->add_option("--source-edges", c.edges, "Source edges.tsv")->required();
    merge->add_option("--aux", c.aux, "aux.tsv")->required();
    merge->add_option("--stopwords", c.stopwords, "Stopword list, one per line");
    merge->add_flag("--fold-plurals", c.fold_plurals, "Treat a trailing 's' as insignificant when matching tokens");
    merge->add_flag("--depth1", c.depth1, "Also write the depth-1 synonym hypernym forest");
    merge->add_option("--out-prefix", c.out_prefix, "Writes nodes.tsv and merge_report.tsv")->required();

    auto* bench = app.add_subcommand("bench", "Component timings on synthetic ontologies");
    bench->add_option("--sizes", c.sizes, "Node counts, comma separated")->delimiter(',')->required();
    bench->add_option("--dims", c.dims, "Dimensions, comma separated")->delimiter(',')->required();
    bench->add_option("--multi-lemma-fraction", c.multi_lemma_fraction, "Fraction of multi-lemma synsets")
        ->check(CLI::Range(0.0, 1.0));
    bench->add_option("--repeats", c.repeats, "Timing repetitions (minimum is kept)")->check(CLI::PositiveNumber);
    add_seed(bench, "--seed", c.seed, "Generator seed");
    bench->add_option("--out", c.out, "bench.tsv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ordersketch::cli::kUsageError;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    return ordersketch::cli::run(c);
}
