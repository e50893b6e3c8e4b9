#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ball_table.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "hyperball.hpp"
#include "numeric.hpp"

namespace ballpark {

// Estimated nodes at distance exactly t from v. Distance 0 is the node
// itself; max_t is the horizon beyond which mass was proven absent or never
// computed, so it contributes 0 rather than a truncated guess.
template <class SizeT>
double num_nodes_dist_from(const BasicBallTable<SizeT>& bt, std::uint32_t v, std::uint32_t t) {
    if (v >= bt.num_nodes()) throw ParameterError("node " + std::to_string(v) + " out of range");
    if (t == 0) return 1.0;
    if (t >= bt.max_t()) return 0.0;
    return static_cast<double>(bt.ball_size(v, t)) - static_cast<double>(bt.ball_size(v, t - 1));
}

// Mean distance over estimated reachable ordered pairs (self-pairs excluded).
template <class SizeT>
double average_path_length(const BasicBallTable<SizeT>& bt) {
    KahanSum weighted;
    KahanSum pairs;
    for (std::uint32_t v = 0; v < bt.num_nodes(); ++v) {
        for (std::uint32_t t = 1; t <= bt.max_t(); ++t) {
            const double d = num_nodes_dist_from(bt, v, t);
            weighted.add(static_cast<double>(t) * d);
            pairs.add(d);
        }
    }
    if (!(pairs.value() > 0.0))
        throw MetricError("no reachable pairs: average path length undefined");
    return weighted.value() / pairs.value();
}

// counts[t] = estimated ordered reachable pairs at distance exactly t,
// t = 1..max_t (index 0 unused).
struct DistanceDistribution {
    std::vector<double> counts;
    double total_pairs = 0.0;
};

template <class SizeT>
DistanceDistribution distance_distribution(const BasicBallTable<SizeT>& bt) {
    DistanceDistribution dist;
    dist.counts.assign(std::size_t{bt.max_t()} + 1, 0.0);
    KahanSum total;
    for (std::uint32_t t = 1; t <= bt.max_t(); ++t) {
        KahanSum bin;
        for (std::uint32_t v = 0; v < bt.num_nodes(); ++v)
            bin.add(num_nodes_dist_from(bt, v, t));
        dist.counts[t] = bin.value();
        total.add(bin.value());
    }
    dist.total_pairs = total.value();
    return dist;
}

// Variance-to-mean ratio of the distance distribution.
inline double dispersion_index(const DistanceDistribution& dist) {
    if (!(dist.total_pairs > 0.0)) throw MetricError("empty distance distribution");
    KahanSum weighted;
    for (std::size_t t = 1; t < dist.counts.size(); ++t)
        weighted.add(static_cast<double>(t) * dist.counts[t]);
    const double mean = weighted.value() / dist.total_pairs;
    if (!(mean > 0.0)) throw MetricError("zero mean distance");
    KahanSum squares;
    for (std::size_t t = 1; t < dist.counts.size(); ++t) {
        const double delta = static_cast<double>(t) - mean;
        squares.add(delta * delta * dist.counts[t]);
    }
    return squares.value() / dist.total_pairs / mean;
}

// Exact mean local clustering: per node, linked neighbour pairs over
// deg·(deg−1)/2, zero below degree 2. The final sum runs over sorted
// per-node values, so the result is bit-identical under node relabeling
// and any thread partition.
inline double avg_clustering(const Graph& g, unsigned threads = 0) {
    if (g.directed()) throw MetricError("clustering requires an undirected graph");
    if (g.num_nodes() == 0) throw InputError("graph has no nodes");
    const std::uint32_t n = g.num_nodes();
    const int nthreads = detail::resolve_threads(threads);
    std::vector<double> coeff(n, 0.0);

#pragma omp parallel num_threads(nthreads)
    {
        // mark[w] == v + 1 iff w is a neighbour of the v being processed;
        // the epoch trick spares a reset per node.
        std::vector<std::uint32_t> mark(n, 0);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t sv = 0; sv < static_cast<std::int64_t>(n); ++sv) {
            const auto v = static_cast<std::uint32_t>(sv);
            const std::size_t deg = g.degree(v);
            if (deg < 2) continue;
            for (const std::uint32_t u : g.neighbors(v)) mark[u] = v + 1;
            std::uint64_t links = 0;
            for (const std::uint32_t u : g.neighbors(v))
                for (const std::uint32_t w : g.neighbors(u)) links += (mark[w] == v + 1);
            // links counts each triangle edge in both directions.
            coeff[v] = static_cast<double>(links) /
                       (static_cast<double>(deg) * static_cast<double>(deg - 1));
        }
    }
    return permutation_invariant_sum(std::move(coeff)) / static_cast<double>(n);
}

struct SmallWorldReport {
    double l = 0.0;      // APL(random) / APL(input)
    double c = 0.0;      // C(input) / C(lattice), 0 when the lattice has none
    double omega = 0.0;  // l − c
    double apl_input = 0.0;
    double apl_random = 0.0;
    double clustering_input = 0.0;
    double clustering_lattice = 0.0;
    std::uint64_t random_seed = 0;  // seed that produced the accepted random graph
    std::uint32_t lattice_k = 0;
    unsigned retries = 0;
    std::vector<std::string> warnings;
};

// omega = APL(R)/APL(G) − C(G)/C(L) against a G(n,m) random reference R and
// a ring lattice L with the nearest even degree. Negative omega reads
// lattice-like, positive reads random-like. A random reference without
// reachable pairs is redrawn with the next seed, up to a retry cap.
inline SmallWorldReport small_world_coefficient(const Graph& g, unsigned precision_bits,
                                                std::uint32_t max_depth, std::uint64_t seed,
                                                unsigned threads = 0,
                                                std::optional<double> apl_input_hint = {}) {
    if (g.directed())
        throw MetricError("small-world coefficient requires an undirected graph");
    if (g.num_nodes() == 0) throw InputError("graph has no nodes");
    constexpr unsigned kMaxRetries = 8;
    const std::uint32_t n = g.num_nodes();
    const std::uint64_t m = g.num_edges();

    HyperBallConfig ball_config;
    ball_config.precision_bits = precision_bits;
    ball_config.max_depth = max_depth;
    ball_config.mode = BallMode::estimate;
    ball_config.seed = seed;
    ball_config.threads = threads;

    SmallWorldReport report;
    report.apl_input = apl_input_hint ? *apl_input_hint
                                      : average_path_length(run_hyperball(g, ball_config));

    bool have_random = false;
    for (unsigned attempt = 0; attempt <= kMaxRetries && !have_random; ++attempt) {
        const std::uint64_t draw_seed = seed + attempt;
        const Graph random = gnm_random(n, m, draw_seed);
        try {
            report.apl_random = average_path_length(run_hyperball(random, ball_config));
            report.random_seed = draw_seed;
            have_random = true;
        } catch (const MetricError&) {
            ++report.retries;
        }
    }
    if (!have_random)
        throw MetricError("random reference graph kept having no reachable pairs");

    const double mean_degree = 2.0 * static_cast<double>(m) / static_cast<double>(n);
    auto k = static_cast<std::uint32_t>(std::llround(mean_degree / 2.0) * 2);
    if (k >= n) k = (n - 1) & ~std::uint32_t{1};
    report.lattice_k = k;
    report.clustering_lattice = avg_clustering(ring_lattice(n, k), threads);
    report.clustering_input = avg_clustering(g, threads);

    report.l = report.apl_random / report.apl_input;
    if (report.clustering_lattice > 0.0) {
        report.c = report.clustering_input / report.clustering_lattice;
    } else {
        report.c = 0.0;
        report.warnings.push_back(
            "reference lattice has no triangles; clustering ratio c set to 0");
    }
    report.omega = report.l - report.c;
    return report;
}

}  // namespace ballpark
