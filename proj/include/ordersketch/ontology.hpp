#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ordersketch {

/// Dense position of a synset inside an Ontology. Positions follow the
/// lexicographic order of node ids, so sorting by index sorts by id.
using NodeIndex = std::uint32_t;

struct Synset {
    std::string id;
    std::vector<std::string> lemmas;

    friend bool operator==(const Synset&, const Synset&) = default;
};

/// child is-a parent
struct Edge {
    NodeIndex child = 0;
    NodeIndex parent = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class OntologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input-format error. `line()` is 1-based, 0 when no line applies.
class ParseError : public OntologyError {
public:
    ParseError(const std::string& what, std::size_t line)
        : OntologyError(line == 0 ? what : what + " at line " + std::to_string(line)), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline bool is_reserved(char c) noexcept { return c == '\t' || c == '\n' || c == '|'; }

inline bool valid_token(std::string_view s) noexcept {
    return !s.empty() && std::none_of(s.begin(), s.end(), is_reserved);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Calls `fn(line, line_number)` for every non-empty, non-comment line.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line.front() == '#') continue;
        fn(std::string_view(line), number);
    }
}

/// Lemma field of nodes.tsv; empty field yields no lemmas.
inline std::vector<std::string> parse_lemma_field(std::string_view field, std::size_t line) {
    std::vector<std::string> lemmas;
    if (field.empty()) return lemmas;
    for (auto part : split(field, '|')) {
        if (part.empty()) throw ParseError("empty lemma name", line);
        if (std::find(lemmas.begin(), lemmas.end(), part) != lemmas.end())
            throw ParseError("duplicate lemma '" + std::string(part) + "'", line);
        lemmas.emplace_back(part);
    }
    return lemmas;
}

inline void join_to(std::ostream& out, std::span<const std::string> items, char sep) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out << sep;
        out << items[i];
    }
}

}  // namespace detail

/// Synsets plus is-a edges. Cycles are allowed here; dagify removes them.
///
/// Instances are immutable once built. Synsets are stored sorted by id and
/// edges sorted by (child, parent), which makes serialization canonical.
class Ontology {
public:
    Ontology() = default;

    /// Validates every structural invariant; throws OntologyError.
    static Ontology from_parts(std::vector<Synset> synsets,
                               const std::vector<std::pair<std::string, std::string>>& edges) {
        Ontology o = with_synsets(std::move(synsets));
        std::vector<Edge> resolved;
        resolved.reserve(edges.size());
        for (const auto& [child, parent] : edges) {
            const auto c = o.find(child);
            const auto p = o.find(parent);
            if (!c) throw OntologyError("edge references unknown node '" + child + "'");
            if (!p) throw OntologyError("edge references unknown node '" + parent + "'");
            if (*c == *p) throw OntologyError("self-edge on '" + child + "'");
            resolved.push_back({*c, *p});
        }
        o.set_edges(std::move(resolved), /*reject_duplicates=*/true);
        return o;
    }

    /// Same as from_parts but with edges already given as indices into the
    /// sorted synset order. Duplicate edges are collapsed.
    static Ontology from_indexed(std::vector<Synset> synsets, std::vector<Edge> edges) {
        Ontology o = with_synsets(std::move(synsets));
        for (const auto& e : edges) {
            if (e.child >= o.size() || e.parent >= o.size())
                throw OntologyError("edge index out of range");
            if (e.child == e.parent) throw OntologyError("self-edge on '" + o.synsets_[e.child].id + "'");
        }
        o.set_edges(std::move(edges), /*reject_duplicates=*/false);
        return o;
    }

    std::size_t size() const noexcept { return synsets_.size(); }
    bool empty() const noexcept { return synsets_.empty(); }

    std::span<const Synset> synsets() const noexcept { return synsets_; }
    const Synset& synset(NodeIndex i) const { return synsets_.at(i); }
    const std::string& id(NodeIndex i) const { return synsets_.at(i).id; }

    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Direct hypernyms of `i`, ascending.
    std::span<const NodeIndex> parents(NodeIndex i) const {
        return std::span<const NodeIndex>(parent_list_).subspan(parent_offset_[i],
                                                                parent_offset_[i + 1] - parent_offset_[i]);
    }

    std::optional<NodeIndex> find(std::string_view id) const {
        auto it = std::lower_bound(synsets_.begin(), synsets_.end(), id,
                                   [](const Synset& s, std::string_view v) { return s.id < v; });
        if (it == synsets_.end() || it->id != id) return std::nullopt;
        return static_cast<NodeIndex>(it - synsets_.begin());
    }

    NodeIndex index_of(std::string_view id) const {
        if (auto i = find(id)) return *i;
        throw OntologyError("unknown node '" + std::string(id) + "'");
    }

    friend bool operator==(const Ontology& a, const Ontology& b) {
        return a.synsets_ == b.synsets_ && a.edges_ == b.edges_;
    }

private:
    static Ontology with_synsets(std::vector<Synset> synsets) {
        for (const auto& s : synsets) {
            if (!detail::valid_token(s.id)) throw OntologyError("invalid node id '" + s.id + "'");
            for (std::size_t i = 0; i < s.lemmas.size(); ++i) {
                if (!detail::valid_token(s.lemmas[i]))
                    throw OntologyError("invalid lemma on node '" + s.id + "'");
                for (std::size_t j = 0; j < i; ++j)
                    if (s.lemmas[i] == s.lemmas[j])
                        throw OntologyError("duplicate lemma '" + s.lemmas[i] + "' on node '" + s.id + "'");
            }
        }
        std::sort(synsets.begin(), synsets.end(), [](const Synset& a, const Synset& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < synsets.size(); ++i)
            if (synsets[i].id == synsets[i - 1].id)
                throw OntologyError("duplicate node id '" + synsets[i].id + "'");
        Ontology o;
        o.synsets_ = std::move(synsets);
        return o;
    }

    void set_edges(std::vector<Edge> edges, bool reject_duplicates) {
        std::sort(edges.begin(), edges.end());
        auto dup = std::adjacent_find(edges.begin(), edges.end());
        if (dup != edges.end()) {
            if (reject_duplicates)
                throw OntologyError("duplicate edge '" + synsets_[dup->child].id + "' -> '" +
                                    synsets_[dup->parent].id + "'");
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        }
        edges_ = std::move(edges);
        parent_offset_.assign(synsets_.size() + 1, 0);
        for (const auto& e : edges_) ++parent_offset_[e.child + 1];
        for (std::size_t i = 0; i < synsets_.size(); ++i) parent_offset_[i + 1] += parent_offset_[i];
        parent_list_.resize(edges_.size());
        // edges_ is sorted by child, so the CSR order is the edge order
        for (std::size_t k = 0; k < edges_.size(); ++k) parent_list_[k] = edges_[k].parent;
    }

    std::vector<Synset> synsets_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> parent_offset_{0};
    std::vector<NodeIndex> parent_list_;
};

/// Reads nodes.tsv: `<node_id>\t<lemma1>|<lemma2>|...`, `#` comments.
inline std::vector<Synset> parse_nodes(std::istream& in) {
    std::vector<Synset> out;
    std::map<std::string, std::size_t, std::less<>> seen;
    detail::for_each_record(in, [&](std::string_view line, std::size_t number) {
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 2) throw ParseError("malformed node line (expected 2 fields)", number);
        if (!detail::valid_token(fields[0])) throw ParseError("invalid node id", number);
        if (!seen.emplace(std::string(fields[0]), number).second)
            throw ParseError("duplicate node id", number);
        out.push_back({std::string(fields[0]), detail::parse_lemma_field(fields[1], number)});
    });
    return out;
}

/// Reads edges.tsv (`<child_id>\t<parent_id>`) against already-parsed nodes.
inline Ontology parse_edges(std::istream& in, std::vector<Synset> nodes) {
    auto skeleton = Ontology::from_indexed(std::move(nodes), {});
    std::vector<Edge> edges;
    std::vector<std::size_t> lines;
    detail::for_each_record(in, [&](std::string_view line, std::size_t number) {
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 2) throw ParseError("malformed edge line (expected 2 fields)", number);
        const auto c = skeleton.find(fields[0]);
        if (!c) throw ParseError("edge references unknown node '" + std::string(fields[0]) + "'", number);
        const auto p = skeleton.find(fields[1]);
        if (!p) throw ParseError("edge references unknown node '" + std::string(fields[1]) + "'", number);
        if (*c == *p) throw ParseError("self-edge", number);
        edges.push_back({*c, *p});
        lines.push_back(number);
    });
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (edges[order[i]] == edges[order[i - 1]]) throw ParseError("duplicate edge", lines[order[i]]);
    std::vector<Synset> synsets(skeleton.synsets().begin(), skeleton.synsets().end());
    return Ontology::from_indexed(std::move(synsets), std::move(edges));
}

inline void write_nodes(std::ostream& out, const Ontology& o) {
    for (const auto& s : o.synsets()) {
        out << s.id << '\t';
        detail::join_to(out, s.lemmas, '|');
        out << '\n';
    }
}

inline void write_edges(std::ostream& out, const Ontology& o) {
    for (const auto& e : o.edges()) out << o.id(e.child) << '\t' << o.id(e.parent) << '\n';
}

/// lemma name -> senses carrying it.
class LemmaIndex {
public:
    using Map = std::map<std::string, std::vector<NodeIndex>, std::less<>>;

    LemmaIndex() = default;
    explicit LemmaIndex(Map senses) : senses_(std::move(senses)) {}

    std::size_t size() const noexcept { return senses_.size(); }
    bool empty() const noexcept { return senses_.empty(); }
    bool contains(std::string_view lemma) const { return senses_.find(lemma) != senses_.end(); }

    std::span<const NodeIndex> senses(std::string_view lemma) const {
        auto it = senses_.find(lemma);
        if (it == senses_.end()) throw OntologyError("unknown lemma '" + std::string(lemma) + "'");
        return it->second;
    }

    const Map& entries() const noexcept { return senses_; }

private:
    Map senses_;
};

inline LemmaIndex build_lemma_index(const Ontology& o) {
    LemmaIndex::Map m;
    for (NodeIndex i = 0; i < o.size(); ++i)
        for (const auto& lemma : o.synset(i).lemmas) m[lemma].push_back(i);
    return LemmaIndex(std::move(m));
}

}  // namespace ordersketch
