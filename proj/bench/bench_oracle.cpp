// Benchmark comparing the serial and OpenMP variants of the confluence
// oracle over a batch of small weighted chains.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dg/graph.hpp"
#include "dg/surgery.hpp"

using namespace dg;

namespace {

std::vector<std::vector<int>> seeds() {
    std::vector<std::vector<int>> out;
    std::vector<int> w(5);
    for (w[0] = -3; w[0] <= 1; ++w[0])
        for (w[1] = -3; w[1] <= 1; ++w[1])
            for (w[2] = -3; w[2] <= 1; ++w[2]) {
                w[3] = w[0];
                w[4] = w[1];
                out.push_back(w);
            }
    return out;
}

double run(bool parallel) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t forms = 0;
    for (const auto& w : seeds()) {
        auto g = make_chain(w);
        forms += surgery::confluence_oracle(g, 3, 10, parallel).size();
    }
    auto t1 = std::chrono::steady_clock::now();
    std::printf("  standard forms found: %zu\n", forms);
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both runs are serial\n");
#endif
    std::printf("seeds: %zu chains of length 5, blowup depth 3, size cap 10\n",
                seeds().size());

    std::printf("serial oracle:\n");
    double ts = run(false);
    std::printf("  %.3f s\n", ts);

    std::printf("parallel oracle:\n");
    double tp = run(true);
    std::printf("  %.3f s\n", tp);

    std::printf("speedup: %.2fx\n", ts / tp);
    return 0;
}
