#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <zlib.h>

#include "errors.hpp"
#include "hash.hpp"

namespace ballpark {

// Ingestion diagnostics. Self-loops are counted per input line, duplicates
// per stored arc (so one repeated undirected edge counts twice).
struct LoadStats {
    std::size_t lines = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_arcs_dropped = 0;
};

// Immutable adjacency in compressed sparse row form. Node ids are dense
// [0, n); raw input labels survive in labels_/id_map_ so a graph can be
// written back out under its original names. Undirected graphs store both
// arc directions. Safe for unrestricted concurrent reads.
class Graph {
public:
    Graph() = default;

    std::uint32_t num_nodes() const noexcept { return n_; }
    // Stored directed arcs; twice the edge count for undirected graphs.
    std::size_t num_arcs() const noexcept { return targets_.size(); }
    std::size_t num_edges() const noexcept {
        return directed_ ? targets_.size() : targets_.size() / 2;
    }
    bool directed() const noexcept { return directed_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(std::uint32_t v) const noexcept {
        return offsets_[v + 1] - offsets_[v];
    }

    const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
    const std::vector<std::uint32_t>& targets() const noexcept { return targets_; }

    // Generated graphs carry no label table; their labels are the decimal ids.
    std::string label(std::uint32_t v) const {
        return labels_.empty() ? std::to_string(v) : labels_[v];
    }
    bool has_label_table() const noexcept { return !labels_.empty(); }
    const std::unordered_map<std::string, std::uint32_t>& id_map() const noexcept {
        return id_map_;
    }

    // Arcs are one entry per input edge; the reverse direction is added here
    // when undirected. Callers must have dropped self-loops already.
    static Graph from_arcs(std::uint32_t n, bool directed,
                           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs,
                           std::vector<std::string> labels = {},
                           std::unordered_map<std::string, std::uint32_t> id_map = {},
                           LoadStats* stats = nullptr) {
        Graph g;
        g.n_ = n;
        g.directed_ = directed;
        g.labels_ = std::move(labels);
        g.id_map_ = std::move(id_map);

        g.offsets_.assign(std::size_t{n} + 1, 0);
        for (const auto& [u, v] : arcs) {
            ++g.offsets_[u + 1];
            if (!directed) ++g.offsets_[v + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

        g.targets_.resize(g.offsets_.back());
        std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (const auto& [u, v] : arcs) {
            g.targets_[cursor[u]++] = v;
            if (!directed) g.targets_[cursor[v]++] = u;
        }

        // Per-row sort + unique; compacting in place keeps peak memory at one
        // targets array.
        std::uint64_t write = 0;
        std::vector<std::uint64_t> compact(std::size_t{n} + 1, 0);
        for (std::uint32_t v = 0; v < n; ++v) {
            auto* first = g.targets_.data() + g.offsets_[v];
            auto* last = g.targets_.data() + g.offsets_[v + 1];
            std::sort(first, last);
            auto* tail = std::unique(first, last);
            write = static_cast<std::uint64_t>(
                std::copy(first, tail, g.targets_.data() + write) - g.targets_.data());
            compact[v + 1] = write;
        }
        if (stats) stats->duplicate_arcs_dropped += g.targets_.size() - write;
        g.targets_.resize(write);
        g.targets_.shrink_to_fit();
        g.offsets_ = std::move(compact);
        return g;
    }

private:
    std::uint32_t n_ = 0;
    bool directed_ = false;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint32_t> targets_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> id_map_;
};

namespace detail {

inline std::string inflate_stream(const std::string& compressed) {
    z_stream zs{};
    // 15 + 32: max window, auto-detect gzip/zlib wrapping.
    if (inflateInit2(&zs, 15 + 32) != Z_OK) throw InputError("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    std::string out;
    out.reserve(compressed.size() * 3);
    std::array<char, 1 << 16> buf;
    int ret = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf.data());
        zs.avail_out = static_cast<uInt>(buf.size());
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw InputError("corrupt compressed stream");
        }
        out.append(buf.data(), buf.size() - zs.avail_out);
    } while (ret != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

}  // namespace detail

// Two whitespace-separated label tokens per line; '#' comment lines and blank
// lines skipped; gzip input recognized by its magic bytes. Dense ids follow
// first appearance among surviving (non-loop) edges, so a node seen only in
// self-loops does not materialize.
inline Graph load_edge_list(std::istream& source, bool directed, LoadStats* stats = nullptr) {
    std::string text((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    if (text.size() >= 2 && static_cast<unsigned char>(text[0]) == 0x1f &&
        static_cast<unsigned char>(text[1]) == 0x8b)
        text = detail::inflate_stream(text);

    std::unordered_map<std::string, std::uint32_t> id_map;
    std::vector<std::string> labels;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    LoadStats local{};

    const auto intern = [&](std::string_view token) {
        const auto [it, inserted] = id_map.try_emplace(std::string(token),
                                                       static_cast<std::uint32_t>(labels.size()));
        if (inserted) {
            if (labels.size() >= std::numeric_limits<std::uint32_t>::max())
                throw InputError("node count exceeds the 32-bit id space");
            labels.push_back(it->first);
        }
        return it->second;
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::array<std::string_view, 2> tokens;
        std::size_t count = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i == line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (count < 2) tokens[count] = line.substr(start, i - start);
            ++count;
        }
        if (count == 0) continue;
        if (tokens[0].front() == '#') continue;
        if (count != 2)
            throw ParseError("expected 2 tokens, found " + std::to_string(count), lineno);
        ++local.lines;
        if (tokens[0] == tokens[1]) {
            ++local.self_loops_dropped;
            continue;
        }
        // Sequenced interning keeps ids in first-appearance order.
        const std::uint32_t src = intern(tokens[0]);
        const std::uint32_t dst = intern(tokens[1]);
        edges.emplace_back(src, dst);
    }

    if (edges.empty()) throw InputError("input contains no usable edges");
    // n read before the moves below; argument evaluation order is unspecified.
    const auto n = static_cast<std::uint32_t>(labels.size());
    Graph g = Graph::from_arcs(n, directed, edges, std::move(labels), std::move(id_map), &local);
    if (stats) *stats = local;
    return g;
}

// Inverse of load_edge_list: one arc per line under the original labels, rows
// in node order, targets ascending; undirected edges written once (u < v).
// Reloading reproduces the labeled structure; dense ids may be renumbered
// because the stream is ordered by id, not by original first appearance.
inline void write_edge_list(const Graph& g, std::ostream& out) {
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
        for (const std::uint32_t v : g.neighbors(u)) {
            if (!g.directed() && v < u) continue;
            out << g.label(u) << ' ' << g.label(v) << '\n';
        }
    }
}

// Uniform undirected simple graph with exactly n nodes and m edges.
// Deterministic per seed across platforms (fixed engine and rejection rule).
inline Graph gnm_random(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (m > pairs)
        throw ParameterError("requested " + std::to_string(m) + " edges, graph holds at most " +
                             std::to_string(pairs));
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(m);
    if (m * 2 >= pairs) {
        // Dense request: enumerate all pairs, draw m by partial Fisher-Yates.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> all;
        all.reserve(pairs);
        for (std::uint32_t u = 0; u + 1 < n; ++u)
            for (std::uint32_t v = u + 1; v < n; ++v) all.emplace_back(u, v);
        for (std::uint64_t i = 0; i < m; ++i) {
            const std::uint64_t j = i + uniform_below(rng, pairs - i);
            std::swap(all[i], all[j]);
            edges.push_back(all[i]);
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(m * 2);
        while (edges.size() < m) {
            std::uint32_t u = static_cast<std::uint32_t>(uniform_below(rng, n));
            std::uint32_t v = static_cast<std::uint32_t>(uniform_below(rng, n));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            const std::uint64_t key = (std::uint64_t{u} << 32) | v;
            if (seen.insert(key).second) edges.emplace_back(u, v);
        }
    }
    return Graph::from_arcs(n, false, edges);
}

// Ring lattice: node i adjacent to i±1 … i±k/2 (mod n). Regular with nk/2
// edges; k even and below n keeps the construction collision-free.
inline Graph ring_lattice(std::uint32_t n, std::uint32_t k) {
    if (k % 2 != 0) throw ParameterError("neighbour count must be even, got " + std::to_string(k));
    if (k >= n)
        throw ParameterError("neighbour count " + std::to_string(k) +
                             " must be below the node count " + std::to_string(n));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(std::size_t{n} * k / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t d = 1; d <= k / 2; ++d)
            edges.emplace_back(i, (i + d) % n);
    return Graph::from_arcs(n, false, edges);
}

}  // namespace ballpark
