#pragma once

#include "dg/extended.hpp"

namespace dg {
namespace models {

/// Extended graph of the type-n Danilov-Gizatullin surface completion with a
/// single (-r)-feather over C_{r+1} and a (-1)-feather over C_n; 1 <= r <= n-1.
extended::ExtendedGraph danilov_gizatullin(int n, int r);

/// Normalized extended graph of the special Gizatullin surface with invariants
/// (n, r, t): boundary [[0,0,-2,...,-2-r at C_t,...,-2]], one feather on C_2,
/// r feathers on C_t, one on C_n; n >= 3, r >= 1, 2 <= t <= n.
extended::NormalizedExtendedGraph special_gizatullin(int n, int r, int t);

/// Vertex id of C_i (i = 0..n) in either model above.
VertexId chain_vertex(int i);

} // namespace models
} // namespace dg
