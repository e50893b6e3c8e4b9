#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ball_table.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "hll.hpp"

namespace ballpark {

enum class BallMode { estimate, exact };

struct HyperBallConfig {
    unsigned precision_bits = 14;
    std::uint32_t max_depth = 10;
    BallMode mode = BallMode::estimate;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = all available
    std::shared_ptr<const BiasTable> bias_table;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Oracle-grade counter: an explicit bitset over the node universe. Same
// interface as HllCounter so the round loop below works for both.
class ExactSetCounter {
public:
    explicit ExactSetCounter(std::uint32_t universe)
        : universe_(universe), words_((std::size_t{universe} + 63) / 64, 0) {}

    void add(std::uint64_t item) { words_[item >> 6] |= std::uint64_t{1} << (item & 63); }

    bool merge(const ExactSetCounter& other) {
        if (universe_ != other.universe_)
            throw ConfigError("set counters cover different universes");
        bool changed = false;
        const std::size_t w = words_.size();
        for (std::size_t i = 0; i < w; ++i) {
            const std::uint64_t merged = words_[i] | other.words_[i];
            if (merged != words_[i]) {
                words_[i] = merged;
                changed = true;
            }
        }
        return changed;
    }

    double count() const noexcept {
        std::uint64_t bits = 0;
        for (const std::uint64_t w : words_) bits += static_cast<std::uint64_t>(std::popcount(w));
        return static_cast<double>(bits);
    }

    friend bool operator==(const ExactSetCounter& a, const ExactSetCounter& b) {
        return a.universe_ == b.universe_ && a.words_ == b.words_;
    }

private:
    std::uint32_t universe_;
    std::vector<std::uint64_t> words_;
};

namespace detail {

inline int resolve_threads(unsigned requested) {
#ifdef _OPENMP
    return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
#else
    (void)requested;
    return 1;
#endif
}

}  // namespace detail

// One synchronous round: next[v] = current[v] unioned with current[w] over
// out-neighbours w. Reads only `current`, writes only `next`; max-merging
// makes the result independent of neighbour order and thread partition.
template <class Counter>
bool counter_union_round(const std::vector<Counter>& current, const Graph& g,
                         std::vector<Counter>& next, unsigned threads = 0) {
    const auto n = static_cast<std::int64_t>(g.num_nodes());
    const int nthreads = detail::resolve_threads(threads);
    bool changed = false;
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : changed) num_threads(nthreads)
    for (std::int64_t v = 0; v < n; ++v) {
        next[v] = current[v];
        bool grew = false;
        for (const std::uint32_t w : g.neighbors(static_cast<std::uint32_t>(v)))
            grew |= next[v].merge(current[w]);
        changed = changed || grew;
    }
    return changed;
}

namespace detail {

template <class Counter, class Factory>
BallTable run_rounds(const Graph& g, const HyperBallConfig& config, Factory make_counter) {
    const std::uint32_t n = g.num_nodes();
    const int nthreads = resolve_threads(config.threads);

    std::vector<Counter> current;
    std::vector<Counter> next;
    current.reserve(n);
    next.reserve(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        current.push_back(make_counter());
        next.push_back(make_counter());
    }
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v)
        current[v].add(static_cast<std::uint64_t>(v));

    // levels[t][v] = |B(v,t)| estimate. The 0-ball is {v}, known exactly, so
    // level 0 skips the counter estimate. Later levels clamp to the running
    // maximum: counters only grow, so a dip can only be estimator noise.
    std::vector<std::vector<double>> levels;
    levels.emplace_back(n, 1.0);
    std::uint32_t max_t = config.max_depth;
    for (std::uint32_t r = 1; r <= config.max_depth; ++r) {
        if (config.deadline && std::chrono::steady_clock::now() > *config.deadline)
            throw TimeBudgetExceeded("ball computation exceeded its time budget");
        if (!counter_union_round(current, g, next, config.threads)) {
            max_t = r;
            break;
        }
        const std::vector<double>& prev = levels.back();
        std::vector<double> level(n);
#pragma omp parallel for schedule(static) num_threads(nthreads)
        for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v)
            level[v] = std::max(prev[v], next[v].count());
        levels.push_back(std::move(level));
        std::swap(current, next);
    }

    BallTable table(n, static_cast<std::uint32_t>(levels.size()), max_t);
    for (std::uint32_t t = 0; t < levels.size(); ++t)
        for (std::uint32_t v = 0; v < n; ++v) table.at(v, t) = levels[t][v];
    return table;
}

}  // namespace detail

// Iterated neighbourhood growth: counters start as {v}, each round unions in
// the out-neighbours' previous-round counters, and per-round cardinalities
// become the ball table rows. Stops at the radius cap or at the first round
// that changes no counter, whichever comes first; per-seed deterministic
// regardless of thread count.
inline BallTable run_hyperball(const Graph& g, const HyperBallConfig& config = {}) {
    if (g.num_nodes() == 0) throw InputError("graph has no nodes");
    if (config.max_depth == 0) throw ParameterError("max_depth must be at least 1");
    if (config.mode == BallMode::exact) {
        const std::uint32_t n = g.num_nodes();
        return detail::run_rounds<ExactSetCounter>(g, config,
                                                   [n] { return ExactSetCounter(n); });
    }
    return detail::run_rounds<HllCounter>(g, config, [&config] {
        HllCounter counter(config.precision_bits, config.seed);
        counter.set_bias_table(config.bias_table);
        return counter;
    });
}

}  // namespace ballpark
