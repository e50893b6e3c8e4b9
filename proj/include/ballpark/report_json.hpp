#pragma once

// Opt-in JSON bindings (pulls in nlohmann/json, which the core headers
// deliberately avoid). nlohmann::json keeps object keys sorted, so dumps of
// equal values are byte-identical.

#include <json.hpp>

#include "ball_table.hpp"
#include "metrics.hpp"

namespace ballpark {

inline void to_json(nlohmann::json& j, const DistanceDistribution& dist) {
    // counts_by_distance[i] = ordered pairs at distance i + 1.
    nlohmann::json counts = nlohmann::json::array();
    for (std::size_t t = 1; t < dist.counts.size(); ++t) counts.push_back(dist.counts[t]);
    j = nlohmann::json{{"counts_by_distance", std::move(counts)},
                       {"total_pairs", dist.total_pairs}};
}

inline void to_json(nlohmann::json& j, const SmallWorldReport& report) {
    j = nlohmann::json{{"l", report.l},
                       {"c", report.c},
                       {"omega", report.omega},
                       {"apl_input", report.apl_input},
                       {"apl_random", report.apl_random},
                       {"clustering_input", report.clustering_input},
                       {"clustering_lattice", report.clustering_lattice},
                       {"random_seed", report.random_seed},
                       {"lattice_k", report.lattice_k},
                       {"retries", report.retries},
                       {"warnings", report.warnings}};
}

template <class SizeT>
void to_json(nlohmann::json& j, const BasicBallTable<SizeT>& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint32_t v = 0; v < table.num_nodes(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (std::uint32_t t = 0; t < table.stored_levels(); ++t) row.push_back(table.at(v, t));
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"num_nodes", table.num_nodes()},
                       {"stored_levels", table.stored_levels()},
                       {"max_t", table.max_t()},
                       {"ball_sizes", std::move(rows)}};
}

}  // namespace ballpark
