#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ordersketch/bench.hpp"
#include "ordersketch/eval.hpp"
#include "support/oracles.hpp"

using namespace ordersketch;

namespace {

struct Fixture {
    Ontology dag;
    UpperSetIndex index;
    LemmaIndex lemmas;
};

Fixture make(Ontology o) {
    Fixture f{std::move(o), {}, {}};
    f.index = compute_upper_sets(f.dag);
    f.lemmas = build_lemma_index(f.dag);
    return f;
}

double auc_of(const std::vector<double>& scores, const std::vector<Label>& labels) {
    return auroc(roc_curve(scores, labels));
}

}  // namespace

TEST(GeneratePairs, ChainPositives) {
    const auto f = make(Ontology::from_parts({{"a", {"La"}}, {"b", {}}, {"c", {}}}, {{"a", "b"}, {"b", "c"}}));
    const auto pairs = generate_pairs(f.dag, f.index, f.lemmas, 5, 1);
    std::set<std::pair<std::string, std::string>> pos;
    for (const auto& r : pairs.records)
        if (r.label == Label::positive) pos.emplace(r.x_key, r.y_key);
    EXPECT_EQ(pos, (std::set<std::pair<std::string, std::string>>{{"l:La", "s:b"}, {"l:La", "s:c"}}));
    // La sits below every synset, so no negatives exist
    EXPECT_EQ(pairs.records.size(), 2u);
    EXPECT_EQ(pairs.short_synsets, 3u);
}

TEST(GeneratePairs, ExhaustsSmallLemmaPools) {
    // root <- {a, b, c}: for synset a, every lemma not at or below a is eligible, including Lr
    const auto f = make(Ontology::from_parts({{"r", {"Lr"}}, {"a", {"La"}}, {"b", {"Lb"}}, {"c", {"Lc"}}},
                                             {{"a", "r"}, {"b", "r"}, {"c", "r"}}));
    const auto pairs = generate_pairs(f.dag, f.index, f.lemmas, 50, 3);
    std::multiset<std::string> neg_for_a;
    for (const auto& r : pairs.records)
        if (r.label == Label::negative && r.y_key == "s:a") neg_for_a.insert(r.x_key);
    EXPECT_EQ(neg_for_a, (std::multiset<std::string>{"l:Lb", "l:Lc", "l:Lr"}));
}

TEST(GeneratePairs, LabelsMatchGroundTruthAndAreDeterministic) {
    const auto f = make(gen_synthetic({800, 160, 3, 0, 21}));
    const auto a = generate_pairs(f.dag, f.index, f.lemmas, 20, 77);
    const auto b = generate_pairs(f.dag, f.index, f.lemmas, 20, 77);
    ASSERT_EQ(a.records.size(), b.records.size());
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].x_key, b.records[i].x_key);
        EXPECT_EQ(a.records[i].y_key, b.records[i].y_key);
        const auto& r = a.records[i];
        const auto y = f.dag.index_of(r.y_key.substr(2));
        bool strictly_below = false, at_or_below = false;
        for (NodeIndex s : f.lemmas.senses(r.x_key.substr(2))) {
            if (is_ancestor(s, y, f.index)) {
                at_or_below = true;
                strictly_below |= s != y;
            }
        }
        if (r.label == Label::positive) {
            EXPECT_TRUE(strictly_below);
        } else {
            ++negatives;
            EXPECT_FALSE(at_or_below);
        }
    }
    EXPECT_GT(negatives, 0u);
    const auto c = generate_pairs(f.dag, f.index, f.lemmas, 20, 78);
    bool differs = c.records.size() != a.records.size();
    for (std::size_t i = 0; !differs && i < a.records.size(); ++i) differs = a.records[i].x_key != c.records[i].x_key;
    EXPECT_TRUE(differs);
}

TEST(GeneratePairs, NegativesWithoutReplacement) {
    const auto f = make(gen_synthetic({300, 60, 2, 0, 5}));
    const auto pairs = generate_pairs(f.dag, f.index, f.lemmas, 20, 9);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& r : pairs.records)
        if (r.label == Label::negative) EXPECT_TRUE(seen.emplace(r.x_key, r.y_key).second);
}

TEST(GeneratePairs, RejectsBadArguments) {
    const auto f = make(Ontology::from_parts({{"a", {"x"}}}, {}));
    EXPECT_THROW(generate_pairs(f.dag, f.index, f.lemmas, 0, 1), std::invalid_argument);
    const auto g = make(Ontology::from_parts({{"a", {}}}, {}));
    EXPECT_THROW(generate_pairs(g.dag, g.index, g.lemmas, 1, 1), std::invalid_argument);
}

TEST(Roc, PerfectSeparation) {
    EXPECT_DOUBLE_EQ(auc_of({1, 1, 1, 0, 0}, {Label::positive, Label::positive, Label::positive, Label::negative,
                                              Label::negative}),
                     1.0);
}

TEST(Roc, AllTiedIsHalf) {
    EXPECT_DOUBLE_EQ(auc_of({0.3, 0.3, 0.3, 0.3}, {Label::positive, Label::negative, Label::negative, Label::positive}),
                     0.5);
}

TEST(Roc, MonotoneFromOriginToOne) {
    Rng rng(4);
    std::vector<double> s;
    std::vector<Label> l;
    for (int i = 0; i < 500; ++i) {
        s.push_back(static_cast<double>(rng.below(20)));
        l.push_back(rng.chance(1, 3) ? Label::positive : Label::negative);
    }
    const auto roc = roc_curve(s, l);
    ASSERT_GE(roc.size(), 2u);
    EXPECT_EQ(roc.front().fpr, 0.0);
    EXPECT_EQ(roc.front().tpr, 0.0);
    EXPECT_EQ(roc.back().fpr, 1.0);
    EXPECT_EQ(roc.back().tpr, 1.0);
    for (std::size_t i = 1; i < roc.size(); ++i) {
        EXPECT_GE(roc[i].fpr, roc[i - 1].fpr);
        EXPECT_GE(roc[i].tpr, roc[i - 1].tpr);
        EXPECT_LT(roc[i].threshold, roc[i - 1].threshold);
    }
}

TEST(Roc, EqualsMannWhitneyOnRandomRecordSets) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const std::size_t n = 50 + rng.below(2000);
        std::vector<double> s, pos, neg;
        std::vector<Label> l;
        for (std::size_t i = 0; i < n; ++i) {
            const bool p = rng.chance(1, 2);
            // coarse scores force plenty of ties
            const double v = static_cast<double>(rng.below(30)) / 10.0 + (p ? 0.5 : 0.0);
            s.push_back(v);
            l.push_back(p ? Label::positive : Label::negative);
            (p ? pos : neg).push_back(v);
        }
        if (pos.empty() || neg.empty()) continue;
        EXPECT_NEAR(auc_of(s, l), oracle::mann_whitney_auc(pos, neg), 1e-12);
    }
}

TEST(Roc, RankInvariant) {
    Rng rng(8);
    std::vector<double> s, t;
    std::vector<Label> l;
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.unit();
        s.push_back(v);
        t.push_back(std::exp(3 * v) - 7);
        l.push_back(rng.unit() < v ? Label::positive : Label::negative);
    }
    EXPECT_DOUBLE_EQ(auc_of(s, l), auc_of(t, l));
}

TEST(Roc, EmptyClassGivesNaN) {
    EXPECT_TRUE(roc_curve(std::vector<double>{1, 2}, std::vector<Label>{Label::positive, Label::positive}).empty());
    EXPECT_TRUE(std::isnan(auc_of({1, 2}, {Label::positive, Label::positive})));
}

TEST(Evaluate, DeviationsAndDegenerates) {
    SketchEmbedding emb(HashSpec(1, 1, 2));
    emb.append("l:x", 3, std::vector<std::int32_t>{2, 0});
    emb.append("s:y", 1, std::vector<std::int32_t>{1, 0});
    emb.append("s:z", 1, std::vector<std::int32_t>{0, 2});
    emb.append("s:zero", 2, std::vector<std::int32_t>{0, 0});
    emb.finalize();
    std::vector<EvalRecord> recs{{"l:x", "s:y", Label::positive},
                                 {"l:x", "s:z", Label::negative},
                                 {"l:x", "s:zero", Label::negative}};
    const auto s = evaluate(recs, emb);
    EXPECT_EQ(recs[0].r, 2.0);
    EXPECT_EQ(recs[1].r, 0.0);
    EXPECT_TRUE(std::isnan(recs[2].r));
    EXPECT_EQ(s.degenerate, 1u);
    EXPECT_EQ(s.positives, 1u);
    EXPECT_EQ(s.negatives, 1u);
    EXPECT_DOUBLE_EQ(s.mean_abs_dev_pos, 1.0);
    EXPECT_DOUBLE_EQ(s.mean_abs_dev_neg, 0.0);
    EXPECT_DOUBLE_EQ(s.auroc, 1.0);
}

TEST(Evaluate, SyntheticOntologySeparates) {
    const auto f = make(gen_synthetic({1500, 300, 2, 0, 2}));
    auto pairs = generate_pairs(f.dag, f.index, f.lemmas, 20, 5);
    const auto emb = embed_all(f.dag, f.index, f.lemmas, HashSpec(11, 12, 100));
    const auto s = evaluate(pairs.records, emb);
    std::vector<double> pos, neg;
    for (const auto& r : pairs.records)
        if (!std::isnan(r.r)) (r.label == Label::positive ? pos : neg).push_back(r.r);
    EXPECT_NEAR(s.auroc, oracle::mann_whitney_auc(pos, neg), 1e-9);
    EXPECT_GT(s.auroc, 0.9);
}

TEST(Sweep, DeterministicAndImprovesWithDimension) {
    const auto f = make(gen_synthetic({1200, 240, 2, 0, 31}));
    const std::vector<std::size_t> dims{10, 20, 50, 100, 200};
    std::vector<double> mean(dims.size(), 0.0);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto pts = sweep_dimension(f.dag, f.index, f.lemmas, dims, 20, seed);
        const auto again = sweep_dimension(f.dag, f.index, f.lemmas, dims, 20, seed);
        std::ostringstream a, b;
        write_sweep_csv(a, pts);
        write_sweep_csv(b, again);
        EXPECT_EQ(a.str(), b.str());
        for (std::size_t i = 0; i < dims.size(); ++i) mean[i] += pts[i].auroc / 3.0;
    }
    // Spearman correlation between d and mean AUROC (no ties in d)
    std::vector<std::size_t> rank(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i)
        rank[i] = static_cast<std::size_t>(std::count_if(mean.begin(), mean.end(), [&](double m) { return m < mean[i]; }));
    double d2 = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) d2 += std::pow(double(i) - double(rank[i]), 2);
    const double n = static_cast<double>(dims.size());
    const double rho = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    EXPECT_GT(rho, 0.0);
}

TEST(Sweep, InjectiveDimensionMakesPositivesExact) {
    const auto f = make(gen_synthetic({60, 12, 2, 0, 17}));
    const std::size_t d = 4096;
    std::vector<std::string> keys;
    for (const auto& s : f.dag.synsets()) keys.push_back(s.id);
    // scan seed bases until the derived bucket hash is injective on U
    std::uint64_t base = 0;
    for (;; ++base) {
        const auto spec = HashSpec::derived(base, d);
        std::set<std::size_t> used;
        bool ok = true;
        for (const auto& k : keys) ok = ok && used.insert(h1(k, spec)).second;
        if (ok) break;
    }
    auto pairs = generate_pairs(f.dag, f.index, f.lemmas, 5, base);
    const auto emb = embed_all(f.dag, f.index, f.lemmas, HashSpec::derived(base, d));
    evaluate(pairs.records, emb);
    for (const auto& r : pairs.records)
        if (r.label == Label::positive) EXPECT_EQ(r.r, 1.0);
}

TEST(Output, CsvFormats) {
    std::vector<EvalRecord> recs{{"l:a,b", "s:y", Label::positive, 0.5}, {"l:\"q\"", "s:y", Label::negative, 0.25}};
    std::ostringstream scores;
    write_scores_csv(scores, recs);
    EXPECT_EQ(scores.str(), "x,y,label,r\n\"l:a,b\",s:y,positive,0.5\n\"l:\"\"q\"\"\",s:y,negative,0.25\n");
    std::ostringstream roc;
    write_roc_csv(roc, roc_curve(std::vector<double>{0.5, 0.25}, std::vector<Label>{Label::positive, Label::negative}));
    EXPECT_EQ(roc.str(), "threshold,fpr,tpr\ninf,0,0\n0.5,0,1\n0.25,1,1\n-inf,1,1\n");
}
