#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dg/graph.hpp"

namespace dg {
namespace extended {

struct Fiber {
    VertexId distinguished; // the C_{2j} meeting the section
    std::vector<VertexId> members; // induce a subtree, distinguished included
};

/// Boundary tree plus degenerate fibers; the combinatorial shadow of D_ext.
struct ExtendedGraph {
    WeightedGraph graph;
    VertexId section = 0;
    std::vector<VertexId> full_fibers; // the C_{0i}, extremal 0-vertices at the section
    std::vector<Fiber> fibers;

    /// Checks the structural invariants (roles, attachment shape, feather
    /// chains); throws Validation on failure.
    void check_structure() const;
};

struct ContractionRound {
    struct Entry {
        VertexId v;
        std::vector<VertexId> neighbors; // at contraction time, within the fiber
    };
    std::vector<Entry> contracted; // simultaneous
};

struct ContractionTranscript {
    // one list of rounds per fiber, indexed like ExtendedGraph::fibers
    std::vector<std::vector<ContractionRound>> per_fiber;

    std::size_t total_blowdowns() const;
};

struct FiberReport {
    struct PerFiber {
        bool ok = false;
        std::string reason; // set when !ok
        std::map<VertexId, int> multiplicities;
        std::vector<ContractionRound> rounds;
    };
    std::vector<PerFiber> fibers;
    bool valid = false;
};

enum class ComponentKind { Star, Plus };

struct MotherAssignment {
    std::map<VertexId, VertexId> mother; // feather vertex -> boundary vertex
    std::map<VertexId, int> base_point_class; // feather vertex -> class id
    std::map<VertexId, ComponentKind> kind; // boundary vertex -> kind
};

/// Boundary graph with per-component feather counts; realized form attaches
/// delta_C extremal (-1)-leaves to each component.
struct NormalizedExtendedGraph {
    WeightedGraph boundary;
    std::map<VertexId, int> delta;

    WeightedGraph realized() const;
    CanonicalCode code() const;
};

/// Infers the extended structure (section, full fibers, fibers with their
/// distinguished roots) from roles of a bare graph; fails with Validation
/// when the shape is not that of an extended graph.
ExtendedGraph assemble(const WeightedGraph& g);

FiberReport validate(const ExtendedGraph& e);
ContractionTranscript contract_canonically(const ExtendedGraph& e);
MotherAssignment mother_map(const ExtendedGraph& e);
NormalizedExtendedGraph normalize(const ExtendedGraph& e);

/// Outer elementary transformation at the full fiber C_{0i}; the new 0-vertex
/// replaces it in full_fibers and the section weight goes up by one.
ExtendedGraph elem_outer_at_full_fiber(const ExtendedGraph& e, VertexId c0i);

} // namespace extended
} // namespace dg
