#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dg/graph.hpp"

namespace dg {
namespace surgery {

struct InnerBlowup {
    VertexId u, v; // the blown-up edge
    VertexId created;
};
struct OuterBlowup {
    VertexId at;
    VertexId created;
};
struct Blowdown {
    VertexId v;
    std::vector<VertexId> neighbors; // at contraction time
};
struct ElemInner {
    VertexId zero_vertex;
    VertexId toward; // other endpoint of the blown-up edge
    VertexId created;
};
struct ElemOuter {
    VertexId zero_vertex;
    VertexId created;
};

using SurgeryStep = std::variant<InnerBlowup, OuterBlowup, Blowdown, ElemInner, ElemOuter>;

std::string step_to_line(const SurgeryStep& step);

struct SurgeryTranscript {
    WeightedGraph initial;
    std::vector<SurgeryStep> steps;
    WeightedGraph final;

    std::string to_log() const; // one step per line
};

/// Replays a step on g; used by transcript replay tests.
WeightedGraph apply_step(const WeightedGraph& g, const SurgeryStep& step);

struct EdgeSite {
    VertexId u, v;
};
struct VertexSite {
    VertexId v;
};
using BlowupSite = std::variant<EdgeSite, VertexSite>;

std::pair<WeightedGraph, SurgeryStep> blow_up(const WeightedGraph& g, const BlowupSite& site,
                                              Role new_role = Role::Feather);
std::pair<WeightedGraph, SurgeryStep> blow_down(const WeightedGraph& g, VertexId v);

struct Outer {};
using ElemDirection = std::variant<EdgeSite, Outer>; // inner: the incident edge to blow up

/// The created vertex inherits the contracted 0-vertex's role and genus.
std::pair<WeightedGraph, SurgeryStep> elementary_transform(const WeightedGraph& g,
                                                           VertexId zero_vertex,
                                                           const ElemDirection& direction);

std::pair<Zigzag, SurgeryTranscript> reverse(const Zigzag& z);

struct StandardizeResult {
    WeightedGraph graph;
    SurgeryTranscript transcript;
};

struct SearchBudget {
    int max_blowup_depth = 6;
    std::size_t size_cap = 24;
    std::size_t node_cap = 200000;
};

StandardizeResult standardize(const WeightedGraph& g, const SearchBudget& budget = {});

/// BFS closure under blowdowns, elementary transformations, and blowups of
/// bounded depth; returns codes of all standard graphs encountered.
std::set<CanonicalCode> confluence_oracle(const WeightedGraph& g, int blowup_depth,
                                          std::size_t size_cap, bool parallel = true,
                                          std::size_t node_cap = 500000);

} // namespace surgery
} // namespace dg
