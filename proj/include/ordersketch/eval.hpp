#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ordersketch/closure.hpp"
#include "ordersketch/ontology.hpp"
#include "ordersketch/random.hpp"
#include "ordersketch/sketch.hpp"

namespace ordersketch {

enum class Label : std::uint8_t { negative = 0, positive = 1 };

inline std::string_view to_string(Label l) { return l == Label::positive ? "positive" : "negative"; }

/// One scored (lemma, synset) query. `r` is NaN until evaluated, and stays
/// NaN when the synset's sketch norm is zero.
struct EvalRecord {
    std::string x_key;
    std::string y_key;
    Label label = Label::negative;
    double r = std::numeric_limits<double>::quiet_NaN();
};

struct PairSet {
    std::vector<EvalRecord> records;
    /// synsets that had fewer than k eligible negative lemmas
    std::size_t short_synsets = 0;
};

/// Positives: every (lemma x, synset y) where some sense of x is a strict
/// descendant of y. Negatives: for each synset y, up to `k` lemmas drawn
/// uniformly without replacement among lemmas with no sense at or below y.
inline PairSet generate_pairs(const Ontology& dag, const UpperSetIndex& index, const LemmaIndex& lemmas,
                              std::size_t k, std::uint64_t rng_seed) {
    if (k == 0) throw std::invalid_argument("negatives per synset must be >= 1");
    if (lemmas.empty()) throw std::invalid_argument("lemma index is empty");

    std::vector<std::string_view> names;
    std::vector<std::vector<NodeIndex>> lemma_up;
    names.reserve(lemmas.size());
    lemma_up.reserve(lemmas.size());
    for (const auto& [name, senses] : lemmas.entries()) {
        names.push_back(name);
        lemma_up.push_back(lemma_upper_set(name, index, lemmas));
    }

    PairSet out;
    std::vector<NodeIndex> strict, scratch;
    for (std::size_t li = 0; li < names.size(); ++li) {
        strict.clear();
        for (NodeIndex s : lemmas.senses(names[li])) {
            scratch.clear();
            const auto up = index.up(s);
            std::vector<NodeIndex> above;
            above.reserve(up.size());
            for (NodeIndex y : up)
                if (y != s) above.push_back(y);
            std::set_union(strict.begin(), strict.end(), above.begin(), above.end(), std::back_inserter(scratch));
            strict.swap(scratch);
        }
        const auto x_key = lemma_key(names[li]);
        for (NodeIndex y : strict) out.records.push_back({x_key, synset_key(dag.id(y)), Label::positive});
    }

    Rng rng(rng_seed);
    auto eligible = [&](std::size_t li, NodeIndex y) {
        return !std::binary_search(lemma_up[li].begin(), lemma_up[li].end(), y);
    };
    const std::size_t budget = 4 * k + 64;
    std::vector<std::size_t> picked, pool;
    for (NodeIndex y = 0; y < dag.size(); ++y) {
        picked.clear();
        for (std::size_t tries = 0; tries < budget && picked.size() < k; ++tries) {
            const auto li = static_cast<std::size_t>(rng.below(names.size()));
            if (eligible(li, y) && std::find(picked.begin(), picked.end(), li) == picked.end()) picked.push_back(li);
        }
        if (picked.size() < k) {
            // too many rejections: enumerate and shuffle instead
            pool.clear();
            for (std::size_t li = 0; li < names.size(); ++li)
                if (eligible(li, y)) pool.push_back(li);
            const std::size_t take = std::min(k, pool.size());
            for (std::size_t i = 0; i < take; ++i)
                std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(pool.size() - i))]);
            picked.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
            if (take < k) ++out.short_synsets;
        }
        const auto y_key = synset_key(dag.id(y));
        for (std::size_t li : picked) out.records.push_back({lemma_key(names[li]), y_key, Label::negative});
    }
    return out;
}

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct EvalSummary {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::size_t degenerate = 0;  ///< excluded pairs with a zero-norm synset sketch
    double mean_abs_dev_pos = std::numeric_limits<double>::quiet_NaN();
    double mean_abs_dev_neg = std::numeric_limits<double>::quiet_NaN();
    std::vector<RocPoint> roc_points;
    double auroc = std::numeric_limits<double>::quiet_NaN();
};

/// ROC for the rule "score >= T" with T swept over every distinct score,
/// bracketed by +inf and -inf. Tied scores move both rates at once, which
/// yields diagonal segments. Empty when either class is empty.
inline std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> labels) {
    std::vector<std::size_t> order;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i])) continue;
        order.push_back(i);
        (labels[i] == Label::positive ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) return {};
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<RocPoint> roc{{inf, 0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double t = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == t; ++i) (labels[order[i]] == Label::positive ? tp : fp) += 1;
        roc.push_back({t, static_cast<double>(fp) / static_cast<double>(neg),
                       static_cast<double>(tp) / static_cast<double>(pos)});
    }
    roc.push_back({-inf, 1.0, 1.0});
    return roc;
}

/// Trapezoidal area under an ROC polyline.
inline double auroc(std::span<const RocPoint> roc) {
    if (roc.empty()) return std::numeric_limits<double>::quiet_NaN();
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i)
        area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
    return area;
}

/// Fills in `r` for every record and summarizes deviations and ROC.
inline EvalSummary evaluate(std::vector<EvalRecord>& records, const SketchEmbedding& emb, unsigned threads = 1) {
    detail::parallel_for(records.size(), threads, [&](std::size_t i) {
        auto& rec = records[i];
        const auto x = emb.row_of(rec.x_key), y = emb.row_of(rec.y_key);
        const auto yy = dot(emb.vector(y), emb.vector(y));
        rec.r = yy == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(dot(emb.vector(x), emb.vector(y))) / static_cast<double>(yy);
    });

    EvalSummary s;
    double dev_pos = 0.0, dev_neg = 0.0;
    std::vector<double> scores;
    std::vector<Label> labels;
    scores.reserve(records.size());
    labels.reserve(records.size());
    for (const auto& rec : records) {
        if (std::isnan(rec.r)) {
            ++s.degenerate;
            continue;
        }
        if (rec.label == Label::positive) {
            ++s.positives;
            dev_pos += std::abs(rec.r - 1.0);
        } else {
            ++s.negatives;
            dev_neg += std::abs(rec.r);
        }
        scores.push_back(rec.r);
        labels.push_back(rec.label);
    }
    if (s.positives) s.mean_abs_dev_pos = dev_pos / static_cast<double>(s.positives);
    if (s.negatives) s.mean_abs_dev_neg = dev_neg / static_cast<double>(s.negatives);
    s.roc_points = roc_curve(scores, labels);
    s.auroc = auroc(s.roc_points);
    return s;
}

struct SweepPoint {
    std::size_t d;
    double auroc;
};

/// Re-embeds and re-evaluates at each dimension with seeds keyed on
/// (rng_seed, d). The pair set is drawn once and shared by all dimensions.
inline std::vector<SweepPoint> sweep_dimension(const Ontology& dag, const UpperSetIndex& index,
                                               const LemmaIndex& lemmas, std::span<const std::size_t> d_values,
                                               std::size_t k, std::uint64_t rng_seed, unsigned threads = 1) {
    if (d_values.empty()) throw std::invalid_argument("no dimensions to sweep");
    auto pairs = generate_pairs(dag, index, lemmas, k, rng_seed);
    std::vector<SweepPoint> out;
    for (std::size_t d : d_values) {
        const auto emb = embed_all(dag, index, lemmas, HashSpec::derived(rng_seed, d), threads);
        out.push_back({d, evaluate(pairs.records, emb, threads).auroc});
    }
    return out;
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// scores.csv: `x,y,label,r`
inline void write_scores_csv(std::ostream& out, const std::vector<EvalRecord>& records) {
    out << "x,y,label,r\n";
    for (const auto& r : records)
        out << detail::csv_field(r.x_key) << ',' << detail::csv_field(r.y_key) << ',' << to_string(r.label) << ','
            << detail::format_double(r.r) << '\n';
}

/// roc.csv: `threshold,fpr,tpr`
inline void write_roc_csv(std::ostream& out, std::span<const RocPoint> roc) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : roc)
        out << detail::format_double(p.threshold) << ',' << detail::format_double(p.fpr) << ','
            << detail::format_double(p.tpr) << '\n';
}

inline void write_summary_tsv(std::ostream& out, const EvalSummary& s, std::size_t short_synsets = 0) {
    out << "positives\t" << s.positives << '\n'
        << "negatives\t" << s.negatives << '\n'
        << "degenerate\t" << s.degenerate << '\n'
        << "short_synsets\t" << short_synsets << '\n'
        << "mean_abs_dev_pos\t" << detail::format_double(s.mean_abs_dev_pos) << '\n'
        << "mean_abs_dev_neg\t" << detail::format_double(s.mean_abs_dev_neg) << '\n'
        << "auroc\t" << detail::format_double(s.auroc) << '\n';
}

/// sweep.csv: `d,auroc`
inline void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
    out << "d,auroc\n";
    for (const auto& p : points) out << p.d << ',' << detail::format_double(p.auroc) << '\n';
}

}  // namespace ordersketch
