// ballpark: neighbourhood-function estimation and distance metrics on graphs.
//
// Subcommands:
//   anf      per-node ball-size table (estimated, exact, or BFS oracle)
//   metrics  distance metrics report as JSON
//   bench    oracle vs estimator timing comparison
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 undefined metric
// under --strict.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ballpark/ballpark.hpp"
#include "ballpark/report_json.hpp"

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

struct RunConfig {
    std::string command;
    std::string input;
    bool directed = false;
    unsigned precision = 14;
    std::size_t minhash_k = 1024;
    std::uint32_t max_depth = 10;
    unsigned threads = 0;  // 0 = all logical cores
    std::uint64_t seed = 42;
    std::string mode = "estimate";
    std::string format = "json";
    std::string output;
    bool binary_output = false;
    std::string bias_table;
    double budget_secs = 3600.0;
    bool strict = false;
};

json config_json(const RunConfig& cfg) {
    return json{{"command", cfg.command},
                {"input", cfg.input},
                {"directed", cfg.directed},
                {"precision", cfg.precision},
                {"minhash_k", cfg.minhash_k},
                {"max_depth", cfg.max_depth},
                {"threads", cfg.threads},
                {"seed", cfg.seed},
                {"mode", cfg.mode},
                {"format", cfg.format},
                {"output", cfg.output},
                {"binary_output", cfg.binary_output},
                {"bias_table", cfg.bias_table},
                {"budget_secs", cfg.budget_secs},
                {"strict", cfg.strict}};
}

std::chrono::steady_clock::time_point deadline_from(const RunConfig& cfg) {
    return std::chrono::steady_clock::now() +
           std::chrono::microseconds(static_cast<std::int64_t>(cfg.budget_secs * 1e6));
}

ballpark::Graph load_input(const RunConfig& cfg, ballpark::LoadStats& stats) {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw ballpark::InputError("cannot open " + cfg.input);
    return ballpark::load_edge_list(in, cfg.directed, &stats);
}

std::shared_ptr<const ballpark::BiasTable> load_bias_table(const RunConfig& cfg) {
    if (cfg.bias_table.empty()) return nullptr;
    std::ifstream in(cfg.bias_table);
    if (!in) throw ballpark::InputError("cannot open " + cfg.bias_table);
    return std::make_shared<const ballpark::BiasTable>(ballpark::BiasTable::parse_csv(in));
}

ballpark::HyperBallConfig ball_config(const RunConfig& cfg, bool exact) {
    ballpark::HyperBallConfig bc;
    bc.precision_bits = cfg.precision;
    bc.max_depth = cfg.max_depth;
    bc.mode = exact ? ballpark::BallMode::exact : ballpark::BallMode::estimate;
    bc.seed = cfg.seed;
    bc.threads = cfg.threads;
    bc.bias_table = load_bias_table(cfg);
    bc.deadline = deadline_from(cfg);
    return bc;
}

json graph_json(const ballpark::Graph& g, const ballpark::LoadStats& stats) {
    return json{{"nodes", g.num_nodes()},
                {"edges", g.num_edges()},
                {"arcs", g.num_arcs()},
                {"directed", g.directed()},
                {"self_loops_dropped", stats.self_loops_dropped},
                {"duplicate_arcs_dropped", stats.duplicate_arcs_dropped}};
}

void write_text_artifact(const RunConfig& cfg, const std::string& bytes) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ballpark::InputError("cannot write " + cfg.output);
    out << bytes;
}

// CSV artifacts carry the config as leading comment lines so they stay
// self-describing without breaking column parsers.
std::string csv_config_banner(const RunConfig& cfg) {
    std::ostringstream banner;
    banner << "# format_version=" << kFormatVersion << '\n';
    const json cfg_json = config_json(cfg);
    for (const auto& [key, value] : cfg_json.items())
        banner << "# config." << key << '=' << value.dump() << '\n';
    return banner.str();
}

template <class SizeT>
void emit_table_artifact(const RunConfig& cfg, const ballpark::BasicBallTable<SizeT>& table) {
    if (cfg.output.empty()) return;
    if (cfg.binary_output) {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) throw ballpark::InputError("cannot write " + cfg.output);
        ballpark::write_ball_table_binary(table, out);
        // Trailer: length-prefixed config echo, after the header + matrix.
        const std::string cfg_dump =
            json{{"format_version", kFormatVersion}, {"config", config_json(cfg)}}.dump();
        ballpark::detail::write_u32_le(out, static_cast<std::uint32_t>(cfg_dump.size()));
        out << cfg_dump;
        return;
    }
    if (cfg.format == "csv") {
        std::ostringstream out;
        out << csv_config_banner(cfg);
        ballpark::write_ball_table_csv(table, out);
        write_text_artifact(cfg, out.str());
        return;
    }
    const json artifact = {
        {"format_version", kFormatVersion}, {"config", config_json(cfg)}, {"table", table}};
    write_text_artifact(cfg, artifact.dump(2) + "\n");
}

int cmd_anf(const RunConfig& cfg) {
    ballpark::LoadStats stats;
    const ballpark::Graph g = load_input(cfg, stats);
    std::cout << "graph: " << cfg.input << "  nodes: " << g.num_nodes()
              << "  edges: " << g.num_edges() << '\n';
    std::cout << "mode: " << cfg.mode << '\n';

    ballpark::StopWatch watch;
    if (cfg.mode == "oracle") {
        ballpark::OracleOptions options;
        options.threads = cfg.threads;
        options.deadline = deadline_from(cfg);
        const ballpark::ExactBallTable table = ballpark::bfs_balls(g, cfg.max_depth, options);
        std::cout << "time: " << ballpark::format_duration(watch.elapsed()) << '\n';
        emit_table_artifact(cfg, table);
    } else {
        const ballpark::BallTable table =
            ballpark::run_hyperball(g, ball_config(cfg, cfg.mode == "exact"));
        std::cout << "time: " << ballpark::format_duration(watch.elapsed()) << '\n';
        emit_table_artifact(cfg, table);
    }
    return 0;
}

// Every metric is attempted; the ones undefined on this input land in
// "errors" instead of aborting the report.
int cmd_metrics(const RunConfig& cfg) {
    ballpark::LoadStats stats;
    const ballpark::Graph g = load_input(cfg, stats);

    json metrics;
    json errors = json::object();
    const auto guard = [&](const char* name, auto&& fn) {
        try {
            metrics[name] = fn();
        } catch (const ballpark::MetricError& e) {
            metrics[name] = nullptr;
            errors[name] = e.what();
        }
    };

    std::optional<double> apl;
    if (cfg.mode == "oracle") {
        ballpark::OracleOptions options;
        options.threads = cfg.threads;
        options.deadline = deadline_from(cfg);
        const ballpark::ExactBallTable table = ballpark::bfs_balls(g, cfg.max_depth, options);
        guard("average_path_length", [&] { return apl.emplace(average_path_length(table)); });
        metrics["distance_distribution"] = ballpark::distance_distribution(table);
        guard("dispersion_index",
              [&] { return dispersion_index(ballpark::distance_distribution(table)); });
    } else {
        const ballpark::BallTable table =
            ballpark::run_hyperball(g, ball_config(cfg, cfg.mode == "exact"));
        guard("average_path_length", [&] { return apl.emplace(average_path_length(table)); });
        metrics["distance_distribution"] = ballpark::distance_distribution(table);
        guard("dispersion_index",
              [&] { return dispersion_index(ballpark::distance_distribution(table)); });
    }
    guard("avg_clustering", [&] { return ballpark::avg_clustering(g, cfg.threads); });
    guard("small_world", [&] {
        return ballpark::small_world_coefficient(g, cfg.precision, cfg.max_depth, cfg.seed,
                                                 cfg.threads, apl);
    });

    const json report = {{"format_version", kFormatVersion},
                         {"config", config_json(cfg)},
                         {"graph", graph_json(g, stats)},
                         {"metrics", metrics},
                         {"errors", errors}};
    const std::string bytes = report.dump(2) + "\n";
    std::cout << bytes;
    if (!cfg.output.empty()) write_text_artifact(cfg, bytes);
    if (cfg.strict && !errors.empty()) return 3;
    return 0;
}

// Three timed runs of the same neighbourhood-function computation. A row
// that outruns the budget reports "> <budget>" instead of failing the bench.
int cmd_bench(const RunConfig& cfg) {
    ballpark::LoadStats stats;
    const ballpark::Graph g = load_input(cfg, stats);

    const auto timed = [&](auto&& fn) -> std::string {
        ballpark::StopWatch watch;
        try {
            fn();
        } catch (const ballpark::TimeBudgetExceeded&) {
            return "> " + ballpark::format_duration(std::chrono::microseconds(
                              static_cast<std::int64_t>(cfg.budget_secs * 1e6)));
        }
        return ballpark::format_duration(watch.elapsed());
    };

    const std::string bfs_seq = timed([&] {
        ballpark::OracleOptions options;
        options.threads = 1;
        options.deadline = deadline_from(cfg);
        ballpark::bfs_balls(g, cfg.max_depth, options);
    });
    ballpark::HyperBallConfig sequential = ball_config(cfg, false);
    sequential.threads = 1;
    const std::string hb_seq = timed([&] { ballpark::run_hyperball(g, sequential); });
    ballpark::HyperBallConfig parallel = ball_config(cfg, false);
    const std::string hb_par = timed([&] { ballpark::run_hyperball(g, parallel); });

    std::ostringstream table;
    table << "graph\tnodes\tedges\tbfs_seq\thyperball_seq\thyperball_par\n"
          << std::filesystem::path(cfg.input).stem().string() << '\t' << g.num_nodes() << '\t'
          << g.num_edges() << '\t' << bfs_seq << '\t' << hb_seq << '\t' << hb_par << '\n';
    std::cout << table.str();
    if (!cfg.output.empty()) write_text_artifact(cfg, table.str());
    return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, unsigned default_precision) {
    cfg.precision = default_precision;
    cmd->add_option("input", cfg.input, "Edge-list file (plain or gzip)")->required();
    cmd->add_option("-p,--precision", cfg.precision, "Register index bits (4-18)")
        ->check(CLI::Range(4u, 18u))
        ->capture_default_str();
    cmd->add_option("--minhash-k", cfg.minhash_k, "Similarity signature slots")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-depth", cfg.max_depth, "Ball radius cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Hash and generator seed")->capture_default_str();
    cmd->add_flag("--directed", cfg.directed, "Treat input arcs as directed");
    cmd->add_option("--mode", cfg.mode, "estimate | exact | oracle")
        ->check(CLI::IsMember({"estimate", "exact", "oracle"}))
        ->capture_default_str();
    cmd->add_option("--format", cfg.format, "Artifact format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("-o,--output", cfg.output, "Artifact path");
    cmd->add_flag("--binary-output", cfg.binary_output,
                  "Write the ball table as a binary dump (anf only)");
    cmd->add_option("--bias-table", cfg.bias_table,
                    "CSV of raw_estimate,bias rows enabling mid-range bias correction");
    cmd->add_option("--budget-secs", cfg.budget_secs, "Wall-clock budget per computation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--strict", cfg.strict, "Exit 3 when a metric is undefined on this input");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neighbourhood-function estimation and distance metrics"};
    app.require_subcommand(1);

    RunConfig anf_cfg, metrics_cfg, bench_cfg;
    CLI::App* anf = app.add_subcommand("anf", "Compute the per-node ball-size table");
    add_common_options(anf, anf_cfg, 14);
    CLI::App* metrics = app.add_subcommand("metrics", "Distance metrics report (JSON)");
    add_common_options(metrics, metrics_cfg, 14);
    // Bench mirrors the low-precision timing setup: estimator accuracy is
    // irrelevant to the speed comparison, so registers stay tiny.
    CLI::App* bench = app.add_subcommand("bench", "Time oracle vs estimator runs");
    add_common_options(bench, bench_cfg, 4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (anf->parsed()) {
            anf_cfg.command = "anf";
            return cmd_anf(anf_cfg);
        }
        if (metrics->parsed()) {
            metrics_cfg.command = "metrics";
            return cmd_metrics(metrics_cfg);
        }
        bench_cfg.command = "bench";
        return cmd_bench(bench_cfg);
    } catch (const ballpark::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ballpark::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ballpark::TimeBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ballpark::MetricError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ballpark::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
