#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ordersketch/ontology.hpp"

namespace ordersketch {

/// Concept from the auxiliary ontology (prefLabel plus synonyms).
struct AuxConcept {
    std::string id;
    std::string pref_label;
    std::vector<std::string> synonyms;

    friend bool operator==(const AuxConcept&, const AuxConcept&) = default;
};

using TokenSet = std::set<std::string, std::less<>>;
using Stopwords = std::set<std::string, std::less<>>;

/// Token equality rule. `exact` compares normalized tokens verbatim;
/// `fold_plural` additionally strips one trailing "s" from tokens longer
/// than three characters (but not from "ss" endings) before comparing.
enum class TokenMatch { exact, fold_plural };

struct MergeOptions {
    TokenMatch match = TokenMatch::exact;
};

struct MergeRecord {
    std::string source_id;
    std::vector<std::string> matched_aux;
    std::vector<std::string> gained_lemmas;

    friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

struct MergeResult {
    Ontology ontology;
    std::vector<MergeRecord> records;
};

/// Prepositions and determiners.
inline const Stopwords& default_stopwords() {
    static const Stopwords words{
        "a",    "an",     "the",    "this",    "that",  "these", "those", "some",  "any",   "each",  "every",
        "no",   "of",     "in",     "on",      "at",    "by",    "for",   "with",  "from",  "to",    "into",
        "onto", "upon",   "about",  "above",   "below", "under", "over",  "between", "among", "through",
        "during", "before", "after", "without", "within", "against", "toward", "towards", "via", "per",
        "and",  "or",     "nor",    "as",      "its",   "their", "his",   "her",   "our",   "your",  "my"};
    return words;
}

/// One word per line; blank lines and `#` comments ignored. Words are
/// lowercased so they compare against normalized tokens.
inline Stopwords read_stopwords(std::istream& in) {
    Stopwords out;
    std::string line;
    while (std::getline(in, line)) {
        std::string word;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (word.empty() || word.front() == '#') continue;
        out.insert(std::move(word));
    }
    return out;
}

/// Lowercases, splits on every ASCII non-alphanumeric byte and drops
/// stopwords and single-character tokens. Bytes >= 0x80 stay inside tokens.
inline TokenSet tokenize(std::string_view label, const Stopwords& stopwords) {
    TokenSet out;
    std::string token;
    auto flush = [&] {
        if (token.size() >= 2 && !stopwords.contains(token)) out.insert(token);
        token.clear();
    };
    for (char ch : label) {
        const auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || std::isalnum(c))
            token += static_cast<char>(std::tolower(c));
        else
            flush();
    }
    flush();
    return out;
}

namespace detail {

inline std::string match_form(std::string_view token, TokenMatch rule) {
    if (rule == TokenMatch::fold_plural && token.size() > 3 && token.back() == 's' && token[token.size() - 2] != 's')
        token.remove_suffix(1);
    return std::string(token);
}

inline TokenSet match_forms(const TokenSet& tokens, TokenMatch rule) {
    if (rule == TokenMatch::exact) return tokens;
    TokenSet out;
    for (const auto& t : tokens) out.insert(match_form(t, rule));
    return out;
}

inline bool overlaps(const TokenSet& a, const TokenSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

}  // namespace detail

/// Accepts `aux` for a source concept when its prefLabel shares a token with
/// the source and at least one synonym does too. Concepts without synonyms
/// never match.
inline bool validate_match(const TokenSet& source, const AuxConcept& aux, const Stopwords& stopwords,
                           const MergeOptions& options = {}) {
    if (aux.synonyms.empty() || source.empty()) return false;
    const auto src = detail::match_forms(source, options.match);
    auto hits = [&](std::string_view label) {
        return detail::overlaps(src, detail::match_forms(tokenize(label, stopwords), options.match));
    };
    if (!hits(aux.pref_label)) return false;
    return std::any_of(aux.synonyms.begin(), aux.synonyms.end(), [&](const auto& s) { return hits(s); });
}

/// Tokens describing a source synset: the union over its lemmas.
inline TokenSet source_tokens(const Synset& s, const Stopwords& stopwords) {
    TokenSet out;
    for (const auto& lemma : s.lemmas) out.merge(tokenize(lemma, stopwords));
    return out;
}

/// Extends each source synset's lemmas with the prefLabel and synonyms of
/// every validated auxiliary concept. Nodes and edges are unchanged.
inline MergeResult merge_ontologies(const Ontology& source, const std::vector<AuxConcept>& aux,
                                    const Stopwords& stopwords, const MergeOptions& options = {}) {
    // inverted index: match form -> aux concepts mentioning it in the prefLabel
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_pref_token;
    for (std::size_t k = 0; k < aux.size(); ++k) {
        if (aux[k].synonyms.empty()) continue;
        for (const auto& t : detail::match_forms(tokenize(aux[k].pref_label, stopwords), options.match))
            by_pref_token[t].push_back(k);
    }

    MergeResult out;
    std::vector<Synset> synsets;
    synsets.reserve(source.size());
    for (const auto& s : source.synsets()) {
        Synset merged = s;
        const auto tokens = source_tokens(s, stopwords);
        std::vector<std::size_t> candidates;
        for (const auto& t : detail::match_forms(tokens, options.match))
            if (auto it = by_pref_token.find(t); it != by_pref_token.end())
                candidates.insert(candidates.end(), it->second.begin(), it->second.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        MergeRecord record{s.id, {}, {}};
        auto gain = [&](const std::string& label) {
            if (std::find(merged.lemmas.begin(), merged.lemmas.end(), label) != merged.lemmas.end()) return;
            merged.lemmas.push_back(label);
            record.gained_lemmas.push_back(label);
        };
        for (std::size_t k : candidates) {
            if (!validate_match(tokens, aux[k], stopwords, options)) continue;
            record.matched_aux.push_back(aux[k].id);
            gain(aux[k].pref_label);
            for (const auto& syn : aux[k].synonyms) gain(syn);
        }
        if (!record.matched_aux.empty()) out.records.push_back(std::move(record));
        synsets.push_back(std::move(merged));
    }
    std::vector<Edge> edges(source.edges().begin(), source.edges().end());
    out.ontology = Ontology::from_indexed(std::move(synsets), std::move(edges));
    return out;
}

/// Each concept becomes a parent node (lemma = prefLabel) with one child per
/// synonym, id `<concept id>#<k>` for the k-th synonym counting from 0.
inline Ontology depth1_hypernyms(const std::vector<AuxConcept>& aux) {
    std::vector<Synset> synsets;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& c : aux) {
        synsets.push_back({c.id, {c.pref_label}});
        for (std::size_t k = 0; k < c.synonyms.size(); ++k) {
            auto child = c.id + "#" + std::to_string(k);
            synsets.push_back({child, {c.synonyms[k]}});
            edges.emplace_back(std::move(child), c.id);
        }
    }
    return Ontology::from_parts(std::move(synsets), edges);
}

/// aux.tsv: `<concept_id>\t<prefLabel>\t<syn1>|<syn2>|...`
inline std::vector<AuxConcept> parse_aux(std::istream& in) {
    std::vector<AuxConcept> out;
    std::set<std::string, std::less<>> ids;
    detail::for_each_record(in, [&](std::string_view line, std::size_t number) {
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 3) throw ParseError("malformed aux line (expected 3 fields)", number);
        if (!detail::valid_token(fields[0])) throw ParseError("invalid concept id", number);
        if (!detail::valid_token(fields[1])) throw ParseError("empty or invalid prefLabel", number);
        if (!ids.emplace(fields[0]).second) throw ParseError("duplicate concept id", number);
        out.push_back({std::string(fields[0]), std::string(fields[1]), detail::parse_lemma_field(fields[2], number)});
    });
    return out;
}

/// merge_report.tsv: `<source_id>\t<aux1>|<aux2>...\t<lemma1>|<lemma2>...`
inline void write_merge_report(std::ostream& out, const std::vector<MergeRecord>& records) {
    for (const auto& r : records) {
        out << r.source_id << '\t';
        detail::join_to(out, r.matched_aux, '|');
        out << '\t';
        detail::join_to(out, r.gained_lemmas, '|');
        out << '\n';
    }
}

}  // namespace ordersketch
