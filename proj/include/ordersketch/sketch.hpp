#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ordersketch/closure.hpp"
#include "ordersketch/hash.hpp"
#include "ordersketch/ontology.hpp"

namespace ordersketch {

using SketchVector = std::vector<std::int32_t>;

inline constexpr std::string_view kSynsetPrefix = "s:";
inline constexpr std::string_view kLemmaPrefix = "l:";

inline std::string synset_key(std::string_view id) { return std::string(kSynsetPrefix) + std::string(id); }
inline std::string lemma_key(std::string_view lemma) { return std::string(kLemmaPrefix) + std::string(lemma); }

/// Raised when OS(y)·OS(y) = 0, i.e. every sign cancelled.
class DegenerateScore : public std::domain_error {
public:
    DegenerateScore() : std::domain_error("degenerate denominator") {}
};

class UnknownKey : public std::out_of_range {
public:
    explicit UnknownKey(std::string_view key) : std::out_of_range("unknown key '" + std::string(key) + "'") {}
};

inline std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::int64_t{a[i]} * b[i];
    return s;
}

/// Countsketch of a set of identity strings: coordinate i is the sum of
/// h2(y) over members y with h1(y) = i. An empty set gives the zero vector.
template <typename Range>
SketchVector sketch_set(const Range& members, const HashSpec& spec) {
    SketchVector v(spec.d, 0);
    for (const auto& m : members) {
        const std::string_view key(m);
        v[h1(key, spec)] += h2(key, spec);
    }
    return v;
}

/// h1/h2 evaluated once per synset id.
struct NodeHashes {
    std::vector<std::uint32_t> bucket;
    std::vector<std::int8_t> sign;
};

inline NodeHashes compute_node_hashes(const Ontology& o, const HashSpec& spec) {
    NodeHashes h;
    h.bucket.resize(o.size());
    h.sign.resize(o.size());
    for (NodeIndex i = 0; i < o.size(); ++i) {
        h.bucket[i] = static_cast<std::uint32_t>(h1(o.id(i), spec));
        h.sign[i] = static_cast<std::int8_t>(h2(o.id(i), spec));
    }
    return h;
}

/// Rows of d signed coordinates keyed by `s:<id>` / `l:<lemma>`, each with
/// the exact upper-set cardinality N.
class SketchEmbedding {
public:
    SketchEmbedding() = default;
    explicit SketchEmbedding(HashSpec spec) : spec_(spec) {}

    const HashSpec& spec() const noexcept { return spec_; }
    std::size_t dim() const noexcept { return spec_.d; }
    std::size_t size() const noexcept { return keys_.size(); }

    /// Reserves `rows` zeroed rows; fill them through `mutable_row`.
    void resize(std::size_t rows) {
        keys_.resize(rows);
        counts_.resize(rows, 0);
        coords_.assign(rows * spec_.d, 0);
    }

    void set_key(std::size_t row, std::string key, std::uint64_t count) {
        keys_.at(row) = std::move(key);
        counts_.at(row) = count;
    }

    std::span<std::int32_t> mutable_row(std::size_t row) {
        return std::span<std::int32_t>(coords_).subspan(row * spec_.d, spec_.d);
    }

    void append(std::string key, std::uint64_t count, std::span<const std::int32_t> coords) {
        if (coords.size() != spec_.d) throw std::invalid_argument("dimension mismatch");
        keys_.push_back(std::move(key));
        counts_.push_back(count);
        coords_.insert(coords_.end(), coords.begin(), coords.end());
        lookup_.clear();
    }

    /// Must be called after rows are filled, before key lookups.
    void finalize() {
        lookup_.clear();
        for (std::size_t r = 0; r < keys_.size(); ++r)
            if (!lookup_.emplace(keys_[r], r).second)
                throw std::invalid_argument("duplicate embedding key '" + keys_[r] + "'");
    }

    std::optional<std::size_t> find(std::string_view key) const {
        auto it = lookup_.find(key);
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t row_of(std::string_view key) const {
        if (auto r = find(key)) return *r;
        throw UnknownKey(key);
    }

    const std::string& key(std::size_t row) const { return keys_.at(row); }
    std::uint64_t count(std::size_t row) const { return counts_.at(row); }
    std::span<const std::int32_t> vector(std::size_t row) const {
        return std::span<const std::int32_t>(coords_).subspan(row * spec_.d, spec_.d);
    }
    std::span<const std::int32_t> vector(std::string_view key) const { return vector(row_of(key)); }

    friend bool operator==(const SketchEmbedding& a, const SketchEmbedding& b) {
        return a.spec_ == b.spec_ && a.keys_ == b.keys_ && a.counts_ == b.counts_ && a.coords_ == b.coords_;
    }

private:
    HashSpec spec_;
    std::vector<std::string> keys_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::int32_t> coords_;
    std::map<std::string, std::size_t, std::less<>> lookup_;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2 * threads) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk, end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
}

}  // namespace detail

/// One row per synset (its upper set) followed by one row per lemma (the
/// union of its senses' upper sets, sketched once). Output does not depend
/// on `threads`.
inline SketchEmbedding embed_all(const Ontology& dag, const UpperSetIndex& index, const LemmaIndex& lemmas,
                                 const HashSpec& spec, const NodeHashes& hashes, unsigned threads = 1) {
    SketchEmbedding emb(spec);
    const std::size_t synsets = dag.size();
    std::vector<std::string_view> lemma_names;
    lemma_names.reserve(lemmas.size());
    for (const auto& [name, senses] : lemmas.entries()) lemma_names.push_back(name);
    emb.resize(synsets + lemma_names.size());

    auto sketch_into = [&](std::span<std::int32_t> row, std::span<const NodeIndex> members) {
        for (NodeIndex y : members) row[hashes.bucket[y]] += hashes.sign[y];
    };

    detail::parallel_for(emb.size(), threads, [&](std::size_t r) {
        if (r < synsets) {
            const auto x = static_cast<NodeIndex>(r);
            const auto up = index.up(x);
            sketch_into(emb.mutable_row(r), up);
            emb.set_key(r, synset_key(dag.id(x)), up.size());
        } else {
            const auto name = lemma_names[r - synsets];
            const auto up = lemma_upper_set(name, index, lemmas);
            sketch_into(emb.mutable_row(r), up);
            emb.set_key(r, lemma_key(name), up.size());
        }
    });
    emb.finalize();
    return emb;
}

inline SketchEmbedding embed_all(const Ontology& dag, const UpperSetIndex& index, const LemmaIndex& lemmas,
                                 const HashSpec& spec, unsigned threads = 1) {
    return embed_all(dag, index, lemmas, spec, compute_node_hashes(dag, spec), threads);
}

struct OrderScore {
    double r = 0.0;
    double r_hat = 0.0;
    bool direction_ok = false;
};

/// r = OS(x)·OS(y) / OS(y)·OS(y), r_hat = OS(x)·OS(y) / N_y,
/// direction_ok = N_y < N_x. Throws DegenerateScore when OS(y) is zero.
inline OrderScore score(std::string_view x_key, std::string_view y_key, const SketchEmbedding& emb) {
    const auto x = emb.row_of(x_key), y = emb.row_of(y_key);
    const auto xy = dot(emb.vector(x), emb.vector(y));
    const auto yy = dot(emb.vector(y), emb.vector(y));
    if (yy == 0) throw DegenerateScore();
    return {static_cast<double>(xy) / static_cast<double>(yy),
            static_cast<double>(xy) / static_cast<double>(emb.count(y)), emb.count(y) < emb.count(x)};
}

enum class DecisionRule {
    ratio,               ///< r >= T
    direction_corrected  ///< r_hat >= T and N_y < N_x
};

inline bool classify(std::string_view x_key, std::string_view y_key, const SketchEmbedding& emb, double threshold,
                     DecisionRule rule = DecisionRule::ratio) {
    if (rule == DecisionRule::ratio) return score(x_key, y_key, emb).r >= threshold;
    const auto x = emb.row_of(x_key), y = emb.row_of(y_key);
    if (!(emb.count(y) < emb.count(x))) return false;
    const double r_hat = static_cast<double>(dot(emb.vector(x), emb.vector(y))) / static_cast<double>(emb.count(y));
    return r_hat >= threshold;
}

/// Embedding TSV: `#ordersketch\td=<d>\tseed1=<hex>\tseed2=<hex>` then
/// `<key>\t<N>\t<c1>,...,<cd>` rows in storage order.
inline void write_embedding(std::ostream& out, const SketchEmbedding& emb) {
    char hex1[17], hex2[17];
    auto to_hex = [](char* buf, std::uint64_t v) {
        static constexpr char digits[] = "0123456789abcdef";
        for (int i = 15; i >= 0; --i, v >>= 4) buf[i] = digits[v & 0xF];
        buf[16] = '\0';
    };
    to_hex(hex1, emb.spec().seed1);
    to_hex(hex2, emb.spec().seed2);
    out << "#ordersketch\td=" << emb.dim() << "\tseed1=" << hex1 << "\tseed2=" << hex2 << '\n';

    std::string line;
    char num[24];
    for (std::size_t r = 0; r < emb.size(); ++r) {
        line.clear();
        line += emb.key(r);
        line += '\t';
        line.append(num, std::to_chars(num, num + sizeof num, emb.count(r)).ptr);
        line += '\t';
        const auto v = emb.vector(r);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) line += ',';
            line.append(num, std::to_chars(num, num + sizeof num, v[i]).ptr);
        }
        line += '\n';
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

namespace detail {

template <typename T>
T parse_number(std::string_view s, std::size_t line, int base = 10) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError("invalid number '" + std::string(s) + "'", line);
    return v;
}

inline std::string_view header_field(std::string_view field, std::string_view name, std::size_t line) {
    if (field.substr(0, name.size()) != name) throw ParseError("malformed embedding header", line);
    return field.substr(name.size());
}

inline std::uint64_t parse_hex(std::string_view s, std::size_t line) {
    if (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X") s.remove_prefix(2);
    return parse_number<std::uint64_t>(s, line, 16);
}

}  // namespace detail

inline SketchEmbedding read_embedding(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing embedding header", 1);
    const auto head = detail::split(line, '\t');
    if (head.size() != 4 || head[0] != "#ordersketch") throw ParseError("malformed embedding header", 1);
    const auto d = detail::parse_number<std::size_t>(detail::header_field(head[1], "d=", 1), 1);
    if (d == 0) throw ParseError("embedding dimension must be >= 1", 1);
    const auto s1 = detail::parse_hex(detail::header_field(head[2], "seed1=", 1), 1);
    const auto s2 = detail::parse_hex(detail::header_field(head[3], "seed2=", 1), 1);
    SketchEmbedding emb(HashSpec(s1, s2, d));

    SketchVector coords(d);
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 3) throw ParseError("malformed embedding row (expected 3 fields)", number);
        const auto count = detail::parse_number<std::uint64_t>(fields[1], number);
        const auto parts = detail::split(fields[2], ',');
        if (parts.size() != d) throw ParseError("embedding row has wrong dimension", number);
        for (std::size_t i = 0; i < d; ++i) coords[i] = detail::parse_number<std::int32_t>(parts[i], number);
        emb.append(std::string(fields[0]), count, coords);
    }
    try {
        emb.finalize();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
    return emb;
}

}  // namespace ordersketch
