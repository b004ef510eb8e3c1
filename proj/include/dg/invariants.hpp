#pragma once

#include <map>
#include <string>
#include <vector>

#include "dg/extended.hpp"
#include "dg/rational.hpp"

namespace dg {
namespace invariants {

using extended::ComponentKind;
using extended::ExtendedGraph;
using extended::NormalizedExtendedGraph;

/// Multiset of base points on one boundary component, together with the
/// automorphism group acting on its chart.
struct PointConfig {
    ComponentKind kind = ComponentKind::Plus;
    std::vector<Rational> points; // kept sorted

    bool operator==(const PointConfig&) const = default;
};

struct ConfigurationInvariant {
    std::map<VertexId, PointConfig> entries; // boundary vertex -> canonical config

    bool operator==(const ConfigurationInvariant&) const = default;
    std::string str() const; // deterministic key/value text form
};

struct FeatherDatum {
    int mother_index = 0; // position of the mother along the zigzag (2..n)
    Rational base_point;
    int chain_length = 1;

    bool operator==(const FeatherDatum&) const = default;
};
using FeatherData = std::vector<FeatherDatum>;

enum class Witness { DirectIso, ReversedIso, GenusMismatch, GraphMismatch };

const char* witness_name(Witness w);

struct Verdict {
    bool equivalent = false;
    Witness witness = Witness::GraphMismatch;
};

/// Orbit-canonical representative under the chart automorphisms: affine maps
/// z -> az+b for Plus, scalings z -> az for Star.
PointConfig canonical_config(const PointConfig& c);

/// Coordinates per feather vertex, as produced by presentation::instantiate.
ConfigurationInvariant configuration_invariant(const ExtendedGraph& e,
                                               const std::map<VertexId, Rational>& coords);

/// Reversion of a normalized graph with zigzag boundary [[0,0,w_2..w_n]]:
/// weights reversed, delta transported along i -> n-i+2.
NormalizedExtendedGraph reverse_normalized(const NormalizedExtendedGraph& d);

Verdict decide_equivalence(const NormalizedExtendedGraph& d1, int genus1,
                           const NormalizedExtendedGraph& d2, int genus2);

/// Reversed-side feather data: (t, p, m) -> (n-t+2, p, m).
FeatherData match_feather_data(const FeatherData& fd, int n);

struct ConfigSpaceDim {
    std::map<VertexId, int> per_component;
    int total = 0;
};

ConfigSpaceDim config_space_dim(const NormalizedExtendedGraph& d,
                                const std::map<VertexId, ComponentKind>& kinds);

} // namespace invariants
} // namespace dg
