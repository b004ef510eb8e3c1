#include "dg/models.hpp"

namespace dg {
namespace models {

VertexId chain_vertex(int i) { return static_cast<VertexId>(i); }

namespace {

// C_0(0) - C_1(0) - C_2 - ... - C_n with ids 0..n
WeightedGraph gizatullin_chain(int n, int middle_weight_at, int middle_weight) {
    WeightedGraph g;
    g.add_vertex(0, Role::FiberZero, 0, "C_0");
    g.add_vertex(0, Role::Section, 0, "C_1");
    for (int i = 2; i <= n; ++i)
        g.add_vertex(i == middle_weight_at ? middle_weight : -2, Role::Boundary, 0,
                     "C_" + std::to_string(i));
    for (int i = 0; i < n; ++i) g.add_edge(chain_vertex(i), chain_vertex(i + 1));
    return g;
}

} // namespace

extended::ExtendedGraph danilov_gizatullin(int n, int r) {
    if (n < 3 || r < 1 || r > n - 1)
        fail(ErrorCode::IndexOutOfRange, "need n >= 3 and 1 <= r <= n-1");
    extended::ExtendedGraph e;
    e.graph = gizatullin_chain(n, -1, 0);
    e.section = chain_vertex(1);
    e.full_fibers = {chain_vertex(0)};
    VertexId f1 = e.graph.add_vertex(-r, Role::Feather, 0, "F_1");
    e.graph.add_edge(chain_vertex(r + 1), f1);
    VertexId f0 = e.graph.add_vertex(-1, Role::Feather, 0, "F_0");
    e.graph.add_edge(chain_vertex(n), f0);
    extended::Fiber fiber;
    fiber.distinguished = chain_vertex(2);
    for (int i = 2; i <= n; ++i) fiber.members.push_back(chain_vertex(i));
    fiber.members.push_back(f1);
    fiber.members.push_back(f0);
    e.fibers.push_back(std::move(fiber));
    return e;
}

extended::NormalizedExtendedGraph special_gizatullin(int n, int r, int t) {
    if (n < 3 || r < 1 || t < 2 || t > n)
        fail(ErrorCode::IndexOutOfRange, "need n >= 3, r >= 1, 2 <= t <= n");
    extended::NormalizedExtendedGraph d;
    d.boundary = gizatullin_chain(n, t, -2 - r);
    for (int i = 0; i <= n; ++i) d.delta[chain_vertex(i)] = 0;
    d.delta[chain_vertex(2)] += 1; // F_1
    d.delta[chain_vertex(t)] += r; // the r feathers on C_t
    d.delta[chain_vertex(n)] += 1; // F_0
    return d;
}

} // namespace models
} // namespace dg
