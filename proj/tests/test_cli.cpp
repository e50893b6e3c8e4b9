#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>
#include <zlib.h>

#include <sys/wait.h>

#include "ballpark/graph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BALLPARK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

class TempDir {
public:
    TempDir() {
        dir_ = fs::temp_directory_path() / ("ballpark_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
    fs::path path(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string gzip_compress(const std::string& data) {
    z_stream zs{};
    REQUIRE(deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) ==
            Z_OK);
    std::string out;
    out.resize(deflateBound(&zs, static_cast<uLong>(data.size())));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
    out.resize(out.size() - zs.avail_out);
    deflateEnd(&zs);
    return out;
}

const std::string kPathEdges = "a b\nb c\n";
const std::string kSixCycle = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
const std::string kTriangle = "x y\ny z\nz x\n";

const std::regex kDurationRe(R"(\d+:\d{2}:\d{2}\.\d{6})");

std::string random_graph_text(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
    const ballpark::Graph g = ballpark::gnm_random(n, m, seed);
    std::ostringstream out;
    ballpark::write_edge_list(g, out);
    return out.str();
}

}  // namespace

TEST_CASE("usage handling and exit codes") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("anf --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 1);              // subcommand required
    CHECK(run_cli("anf").exit_code == 1);           // input required
    CHECK(run_cli("frobnicate x").exit_code == 1);  // unknown subcommand
    TempDir tmp;
    const auto input = tmp.file("p.txt", kPathEdges);
    CHECK(run_cli("anf " + input.string() + " --no-such-flag").exit_code == 1);
    CHECK(run_cli("anf " + input.string() + " --mode sideways").exit_code == 1);
    CHECK(run_cli("anf " + input.string() + " -p 3").exit_code == 1);
    CHECK(run_cli("anf " + input.string() + " --max-depth 0").exit_code == 1);
}

TEST_CASE("unusable inputs exit with code 2") {
    TempDir tmp;
    const RunResult empty = run_cli("anf " + tmp.file("empty.txt", "").string());
    CHECK(empty.exit_code == 2);
    CHECK(empty.output.find("error") != std::string::npos);

    const RunResult missing = run_cli("anf " + tmp.path("nonexistent.txt").string());
    CHECK(missing.exit_code == 2);

    const RunResult malformed = run_cli("anf " + tmp.file("bad.txt", "a b\nc d e\n").string());
    CHECK(malformed.exit_code == 2);
    CHECK(malformed.output.find("line 2") != std::string::npos);
}

TEST_CASE("ball-size run reports the graph and its timing") {
    TempDir tmp;
    const auto input = tmp.file("p.txt", kPathEdges);
    const RunResult r = run_cli("anf " + input.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("nodes: 3") != std::string::npos);
    CHECK(r.output.find("edges: 2") != std::string::npos);
    CHECK(r.output.find("mode: estimate") != std::string::npos);
    CHECK(std::regex_search(r.output, kDurationRe));
}

TEST_CASE("json artifact embeds config, version, and the table") {
    TempDir tmp;
    const auto input = tmp.file("p.txt", kPathEdges);
    const auto artifact = tmp.path("t.json");
    REQUIRE(run_cli("anf " + input.string() + " --mode exact -o " + artifact.string())
                .exit_code == 0);
    const json j = json::parse(slurp(artifact));
    CHECK(j.at("format_version") == 1);
    CHECK(j.at("config").at("command") == "anf");
    CHECK(j.at("config").at("mode") == "exact");
    CHECK(j.at("config").at("seed") == 42);
    CHECK(j.at("config").at("precision") == 14);
    CHECK(j.at("config").at("input") == input.string());
    CHECK(j.at("table").at("num_nodes") == 3);
    CHECK(j.at("table").at("max_t") == 3);
    const auto rows = j.at("table").at("ball_sizes");
    CHECK(rows.at(0) == json::array({1.0, 2.0, 3.0}));
    CHECK(rows.at(1) == json::array({1.0, 3.0, 3.0}));
    CHECK(rows.at(2) == json::array({1.0, 2.0, 3.0}));
}

TEST_CASE("csv artifact carries the config as a comment banner") {
    TempDir tmp;
    const auto input = tmp.file("p.txt", kPathEdges);
    const auto artifact = tmp.path("t.csv");
    REQUIRE(run_cli("anf " + input.string() + " --mode exact --format csv -o " +
                    artifact.string())
                .exit_code == 0);
    const std::string text = slurp(artifact);
    CHECK(text.rfind("# format_version=1\n", 0) == 0);
    CHECK(text.find("# config.mode=\"exact\"\n") != std::string::npos);
    CHECK(text.find("# config.seed=42\n") != std::string::npos);
    CHECK(text.find("node,t,ball_size\n") != std::string::npos);
    CHECK(text.find("0,1,2\n") != std::string::npos);
    CHECK(text.find("1,1,3\n") != std::string::npos);
}

TEST_CASE("binary artifact is a table dump with a config trailer") {
    TempDir tmp;
    const auto input = tmp.file("p.txt", kPathEdges);
    const auto artifact = tmp.path("t.bin");
    REQUIRE(run_cli("anf " + input.string() + " --mode exact --binary-output -o " +
                    artifact.string())
                .exit_code == 0);
    const std::string bytes = slurp(artifact);
    REQUIRE(bytes.size() > 96);
    CHECK(bytes.compare(0, 4, "BPBT") == 0);
    // 20-byte header, 3x3 doubles, then a length-prefixed config echo.
    const std::size_t trailer_at = 20 + 9 * 8;
    std::uint32_t len = 0;
    std::memcpy(&len, bytes.data() + trailer_at, sizeof len);
    REQUIRE(trailer_at + 4 + len == bytes.size());
    const json trailer = json::parse(bytes.substr(trailer_at + 4));
    CHECK(trailer.at("format_version") == 1);
    CHECK(trailer.at("config").at("command") == "anf");
    CHECK(trailer.at("config").at("binary_output") == true);
}

TEST_CASE("oracle mode emits the same ball sizes as exact mode") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(40, 80, 5));
    const auto exact = tmp.path("exact.json");
    const auto oracle = tmp.path("oracle.json");
    REQUIRE(run_cli("anf " + input.string() + " --mode exact --max-depth 41 -o " +
                    exact.string())
                .exit_code == 0);
    REQUIRE(run_cli("anf " + input.string() + " --mode oracle --max-depth 41 -o " +
                    oracle.string())
                .exit_code == 0);
    const json je = json::parse(slurp(exact));
    const json jo = json::parse(slurp(oracle));
    const auto& er = je.at("table").at("ball_sizes");
    const auto& or_ = jo.at("table").at("ball_sizes");
    REQUIRE(er.size() == or_.size());
    for (std::size_t v = 0; v < er.size(); ++v)
        for (std::size_t t = 0; t < er.at(v).size() && t < or_.at(v).size(); ++t)
            REQUIRE(er.at(v).at(t).get<double>() == or_.at(v).at(t).get<double>());
}

TEST_CASE("artifacts are byte-identical across reruns and threads") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(300, 900, 6));
    // The config echo includes the output path, so identical-config reruns
    // must land on the same file; bytes are captured between runs.
    const auto a = tmp.path("a.json");
    const std::string base = "anf " + input.string() + " -p 8 --seed 7 ";
    REQUIRE(run_cli(base + "-o " + a.string()).exit_code == 0);
    const std::string first = slurp(a);
    REQUIRE(run_cli(base + "-o " + a.string()).exit_code == 0);
    CHECK(first == slurp(a));

    const auto t1 = tmp.path("t1.json");
    const auto t4 = tmp.path("t4.json");
    REQUIRE(run_cli(base + "--threads 1 -o " + t1.string()).exit_code == 0);
    REQUIRE(run_cli(base + "--threads 4 -o " + t4.string()).exit_code == 0);
    // Configs differ in the thread count; the computed table must not.
    CHECK(json::parse(slurp(t1)).at("table") == json::parse(slurp(t4)).at("table"));

    const auto s8 = tmp.path("s8.json");
    REQUIRE(run_cli("anf " + input.string() + " -p 8 --seed 8 -o " + s8.string()).exit_code ==
            0);
    CHECK(json::parse(first).at("table") != json::parse(slurp(s8)).at("table"));
}

TEST_CASE("csv and binary artifacts are also deterministic") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(120, 360, 9));
    for (const std::string fmt : {" --format csv ", " --binary-output "}) {
        const auto a = tmp.path("d" + std::to_string(fmt.size()) + ".out");
        const std::string base = "anf " + input.string() + " -p 8" + fmt;
        REQUIRE(run_cli(base + "-o " + a.string()).exit_code == 0);
        const std::string first = slurp(a);
        REQUIRE(run_cli(base + "-o " + a.string()).exit_code == 0);
        CHECK(first == slurp(a));
    }
}

TEST_CASE("metrics report on the six-cycle") {
    TempDir tmp;
    const auto input = tmp.file("c6.txt", kSixCycle);
    const RunResult r = run_cli("metrics " + input.string() + " --mode exact");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("format_version") == 1);
    CHECK(j.at("graph").at("nodes") == 6);
    CHECK(j.at("graph").at("edges") == 6);
    CHECK(j.at("graph").at("directed") == false);
    CHECK(j.at("metrics").at("average_path_length").get<double>() == Catch::Approx(1.8));
    CHECK(j.at("metrics").at("avg_clustering").get<double>() == 0.0);
    CHECK(j.at("metrics").at("distance_distribution").at("total_pairs").get<double>() == 30.0);
    CHECK(j.at("metrics").at("dispersion_index").get<double>() > 0.0);
    const auto& sw = j.at("metrics").at("small_world");
    CHECK(sw.at("omega").get<double>() ==
          sw.at("l").get<double>() - sw.at("c").get<double>());
    CHECK(j.at("errors").empty());
}

TEST_CASE("metrics report on the triangle") {
    TempDir tmp;
    const auto input = tmp.file("k3.txt", kTriangle);
    const RunResult r = run_cli("metrics " + input.string() + " --mode oracle");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("metrics").at("avg_clustering").get<double>() == 1.0);
    CHECK(j.at("metrics").at("average_path_length").get<double>() == 1.0);
    CHECK(j.at("metrics").at("dispersion_index").get<double>() == 0.0);
}

TEST_CASE("estimate-mode metrics stay near the exact values") {
    TempDir tmp;
    const auto input = tmp.file("c6.txt", kSixCycle);
    const RunResult r = run_cli("metrics " + input.string());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("metrics").at("average_path_length").get<double>() ==
          Catch::Approx(1.8).epsilon(0.02));
}

TEST_CASE("undefined metrics are reported per metric") {
    TempDir tmp;
    const auto input = tmp.file("d.txt", "a b\nb c\n");
    const RunResult r = run_cli("metrics " + input.string() + " --directed --mode exact");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("metrics").at("avg_clustering").is_null());
    CHECK(j.at("errors").contains("avg_clustering"));
    CHECK(j.at("metrics").at("small_world").is_null());
    CHECK(j.at("errors").contains("small_world"));
    // Path metrics still came through.
    CHECK(j.at("metrics").at("average_path_length").get<double>() ==
          Catch::Approx(4.0 / 3.0).margin(1e-12));

    const RunResult strict =
        run_cli("metrics " + input.string() + " --directed --mode exact --strict");
    CHECK(strict.exit_code == 3);
}

TEST_CASE("metrics artifact mirrors stdout") {
    TempDir tmp;
    const auto input = tmp.file("k3.txt", kTriangle);
    const auto artifact = tmp.path("report.json");
    const RunResult r =
        run_cli("metrics " + input.string() + " --mode exact -o " + artifact.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output == slurp(artifact));
}

TEST_CASE("bench prints a three-way timing table") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(80, 160, 3));
    const RunResult r = run_cli("bench " + input.string() + " --max-depth 5");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string header, row;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK(header == "graph\tnodes\tedges\tbfs_seq\thyperball_seq\thyperball_par");
    CHECK(row.rfind("g\t80\t160\t", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), '\t') == 5);
    CHECK(std::regex_search(row, kDurationRe));
}

TEST_CASE("bench reports budget exhaustion inside the table") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(3000, 9000, 4));
    const RunResult r =
        run_cli("bench " + input.string() + " --max-depth 3001 --budget-secs 0.0001");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("> 0:00:00.000100") != std::string::npos);
}

TEST_CASE("an exhausted budget outside bench is an error exit") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(3000, 9000, 4));
    const RunResult r = run_cli("anf " + input.string() +
                                " --mode oracle --max-depth 3001 --budget-secs 0.0001");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("gzip input goes through every subcommand") {
    TempDir tmp;
    const auto input = tmp.file("c6.txt.gz", gzip_compress(kSixCycle));
    CHECK(run_cli("anf " + input.string()).exit_code == 0);
    const RunResult r = run_cli("metrics " + input.string() + " --mode exact");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.output).at("graph").at("nodes") == 6);
}

TEST_CASE("bias table plumbs through when well-formed and fails loud otherwise") {
    TempDir tmp;
    const auto input = tmp.file("g.txt", random_graph_text(200, 600, 11));
    const auto good = tmp.file("bias.csv", "10,1.5\n100,8.0\n1000,20.0\n");
    CHECK(run_cli("anf " + input.string() + " -p 8 --bias-table " + good.string()).exit_code ==
          0);
    const auto bad = tmp.file("bias_bad.csv", "10,1.5\noops\n");
    const RunResult r =
        run_cli("anf " + input.string() + " -p 8 --bias-table " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("line 2") != std::string::npos);
}
