// Minimal library walkthrough: build a graph, estimate its neighbourhood
// growth, derive distance metrics, and compare two node-set sketches.
// Run it with no arguments, or pass an edge-list file to analyse instead.

#include <fstream>
#include <iostream>

#include "ballpark/ballpark.hpp"

int main(int argc, char** argv) {
    using namespace ballpark;

    Graph g = [&] {
        if (argc > 1) {
            std::ifstream in(argv[1], std::ios::binary);
            if (!in) {
                std::cerr << "cannot open " << argv[1] << "\n";
                std::exit(2);
            }
            return load_edge_list(in, false);
        }
        return gnm_random(2000, 12000, 7);
    }();
    std::cout << "graph: " << g.num_nodes() << " nodes, " << g.num_edges() << " edges\n";

    // Neighbourhood growth with probabilistic counters. Depth 16 is plenty
    // for a graph this dense; the run stops early once every ball saturates.
    HyperBallConfig config;
    config.precision_bits = 12;
    config.max_depth = 16;
    config.seed = 42;
    const BallTable balls = run_hyperball(g, config);
    std::cout << "converged after " << balls.max_t() << " rounds\n";

    std::cout << "average path length: " << average_path_length(balls) << "\n";
    const DistanceDistribution dist = distance_distribution(balls);
    std::cout << "reachable pairs: " << dist.total_pairs << "\n";
    std::cout << "dispersion index: " << dispersion_index(dist) << "\n";
    std::cout << "average clustering: " << avg_clustering(g) << "\n";

    const SmallWorldReport sw = small_world_coefficient(g, config.precision_bits,
                                                        config.max_depth, config.seed);
    std::cout << "small-world omega: " << sw.omega << "  (l=" << sw.l << ", c=" << sw.c << ")\n";

    // Combined counter+signature sketches estimate set overlap without
    // storing the sets: here the 1-hop neighbourhoods of nodes 0 and 1.
    SketchConfig sketch_config;
    sketch_config.precision_bits = 12;
    sketch_config.minhash_k = 512;
    sketch_config.seed = 42;
    NeighbourhoodSketch s0(sketch_config), s1(sketch_config);
    for (const std::uint32_t w : g.neighbors(0)) s0.add(w);
    for (const std::uint32_t w : g.neighbors(1)) s1.add(w);
    std::cout << "neighbourhood jaccard(0,1) ~= " << s0.jaccard(s1) << "\n";
    std::cout << "shared neighbours ~= " << estimate_intersection(s0, s1) << "\n";
    return 0;
}
