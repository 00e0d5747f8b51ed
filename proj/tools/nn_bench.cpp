// Benchmark of the neighbor-search kernels: serial brute force (reference),
// OpenMP brute force and the kd-tree, on uniform euclidean clouds. Verifies
// that all three return the identical neighbor array before timing.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nnpsi/neighbor_graph.hpp"
#include "nnpsi/rng.hpp"

using nnpsi::NeighborGraph;
using nnpsi::NeighborStrategy;
using nnpsi::PointCloud;

namespace {

PointCloud random_cloud(int n, int d, std::uint64_t seed) {
    nnpsi::Rng rng(seed);
    std::vector<double> coords(static_cast<std::size_t>(n) * d);
    for (double& c : coords) c = rng.uniform01();
    return PointCloud::euclidean(n, d, std::move(coords));
}

double time_ms(const PointCloud& cloud, NeighborStrategy strategy, NeighborGraph& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = nnpsi::build_neighbor_graph(cloud, strategy);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes{1000, 4000, 16000};
    int d = 2;
    if (argc > 1) d = std::atoi(argv[1]);
    if (argc > 2) {
        sizes.clear();
        for (int a = 2; a < argc; ++a) sizes.push_back(std::atoi(argv[a]));
    }
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    std::printf("%8s %4s %14s %14s %14s %8s\n", "n", "d", "serial[ms]", "omp[ms]", "kdtree[ms]",
                "match");
    for (int n : sizes) {
        const PointCloud cloud = random_cloud(n, d, 42 + n);
        NeighborGraph gs, gp, gk;
        const double ts = time_ms(cloud, NeighborStrategy::BruteSerial, gs);
        const double tp = time_ms(cloud, NeighborStrategy::BruteParallel, gp);
        const double tk = time_ms(cloud, NeighborStrategy::KdTree, gk);
        const bool match = gs.nbr == gp.nbr && gs.nbr == gk.nbr &&
                           gs.had_ties == gp.had_ties && gs.had_ties == gk.had_ties;
        std::printf("%8d %4d %14.2f %14.2f %14.2f %8s\n", n, d, ts, tp, tk,
                    match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
