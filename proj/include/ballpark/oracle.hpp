#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ball_table.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "hyperball.hpp"

namespace ballpark {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Sequential by default so oracle timings reflect the plain brute-force
// baseline; threads > 0 partitions sources for validation convenience.
struct OracleOptions {
    unsigned threads = 1;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source) {
    std::vector<std::uint32_t> dist(g.num_nodes(), kUnreachable);
    std::vector<std::uint32_t> queue;
    queue.reserve(g.num_nodes());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        for (const std::uint32_t w : g.neighbors(u)) {
            if (dist[w] != kUnreachable) continue;
            dist[w] = dist[u] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

// Exact |B(v,t)| for t = 0..max_depth via one truncated BFS per source; rows
// plateau past each node's eccentricity, so with max_depth >= diameter the
// last column is the reachable-component size.
inline ExactBallTable bfs_balls(const Graph& g, std::uint32_t max_depth,
                                const OracleOptions& options = {}) {
    if (g.num_nodes() == 0) throw InputError("graph has no nodes");
    if (max_depth == 0) throw ParameterError("max_depth must be at least 1");
    const std::uint32_t n = g.num_nodes();
    ExactBallTable table(n, max_depth + 1, max_depth);
    const int nthreads = detail::resolve_threads(options.threads);
    std::atomic<bool> out_of_time{false};

#pragma omp parallel num_threads(nthreads)
    {
        std::vector<std::uint32_t> dist(n);
        std::vector<std::uint32_t> queue;
        queue.reserve(n);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t sv = 0; sv < static_cast<std::int64_t>(n); ++sv) {
            if (out_of_time.load(std::memory_order_relaxed)) continue;
            if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
                out_of_time.store(true, std::memory_order_relaxed);
                continue;
            }
            const auto source = static_cast<std::uint32_t>(sv);
            dist.assign(n, kUnreachable);
            queue.clear();
            dist[source] = 0;
            queue.push_back(source);
            std::uint64_t within = 1;
            std::size_t head = 0;
            std::uint32_t t = 0;
            table.at(source, 0) = 1;
            while (t < max_depth) {
                const std::size_t frontier_end = queue.size();
                for (; head < frontier_end; ++head) {
                    const std::uint32_t u = queue[head];
                    for (const std::uint32_t w : g.neighbors(u)) {
                        if (dist[w] != kUnreachable) continue;
                        dist[w] = t + 1;
                        queue.push_back(w);
                        ++within;
                    }
                }
                ++t;
                table.at(source, t) = within;
                if (queue.size() == frontier_end) {
                    for (std::uint32_t rest = t + 1; rest <= max_depth; ++rest)
                        table.at(source, rest) = within;
                    break;
                }
            }
        }
    }
    if (out_of_time.load()) throw TimeBudgetExceeded("BFS oracle exceeded its time budget");
    return table;
}

// Mean shortest-path distance over reachable ordered pairs, full-depth BFS
// from every source. Integer distance sums keep the result independent of
// the thread partition.
inline double exact_average_path_length(const Graph& g, const OracleOptions& options = {}) {
    if (g.num_nodes() == 0) throw InputError("graph has no nodes");
    const std::uint32_t n = g.num_nodes();
    const int nthreads = detail::resolve_threads(options.threads);
    std::atomic<bool> out_of_time{false};
    std::uint64_t distance_sum = 0;
    std::uint64_t pair_count = 0;

#pragma omp parallel num_threads(nthreads) reduction(+ : distance_sum, pair_count)
    {
        std::vector<std::uint32_t> dist(n);
        std::vector<std::uint32_t> queue;
        queue.reserve(n);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t sv = 0; sv < static_cast<std::int64_t>(n); ++sv) {
            if (out_of_time.load(std::memory_order_relaxed)) continue;
            if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
                out_of_time.store(true, std::memory_order_relaxed);
                continue;
            }
            const auto source = static_cast<std::uint32_t>(sv);
            dist.assign(n, kUnreachable);
            queue.clear();
            dist[source] = 0;
            queue.push_back(source);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const std::uint32_t u = queue[head];
                for (const std::uint32_t w : g.neighbors(u)) {
                    if (dist[w] != kUnreachable) continue;
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                    distance_sum += dist[w];
                    ++pair_count;
                }
            }
        }
    }
    if (out_of_time.load()) throw TimeBudgetExceeded("BFS oracle exceeded its time budget");
    if (pair_count == 0) throw MetricError("no reachable pairs: average path length undefined");
    return static_cast<double>(distance_sum) / static_cast<double>(pair_count);
}

}  // namespace ballpark
