#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dg/error.hpp"

namespace dg {

using VertexId = std::uint32_t;

enum class Role { Section, FiberZero, Boundary, Feather };

const char* role_name(Role r);

struct VertexLabel {
    VertexId id = 0;
    int weight = 0;
    int genus = 0; // only the section may carry genus > 0
    Role role = Role::Boundary;
    std::string name;
};

/// Undirected weighted graph; loops and multi-edges are representable but
/// rejected by the tree-only algorithms.
class WeightedGraph {
public:
    VertexId add_vertex(int weight, Role role = Role::Boundary, int genus = 0,
                        std::string name = {});
    /// Inserts with a caller-chosen id; fails if the id is taken.
    VertexId add_vertex_with_id(VertexId id, int weight, Role role = Role::Boundary,
                                int genus = 0, std::string name = {});
    void add_edge(VertexId u, VertexId v);
    void remove_edge(VertexId u, VertexId v);
    void remove_vertex(VertexId v); // incident edges go with it
    void set_weight(VertexId v, int w);

    bool has_vertex(VertexId v) const;
    bool has_edge(VertexId u, VertexId v) const;
    const VertexLabel& vertex(VertexId v) const;
    VertexLabel& vertex_mut(VertexId v);

    const std::vector<VertexLabel>& vertices() const { return verts_; }
    const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
    std::size_t vertex_count() const { return verts_.size(); }

    /// Neighbors in id order; a loop contributes its vertex twice.
    std::vector<VertexId> neighbors(VertexId v) const;
    /// Loops count twice.
    std::size_t degree(VertexId v) const;

    bool has_loop_or_multiedge() const;
    bool is_tree() const; // connected, no loops/multi-edges; empty graph counts
    void require_tree(const char* op) const;

private:
    std::size_t index_of(VertexId v) const;

    std::vector<VertexLabel> verts_; // sorted by id
    std::vector<std::pair<VertexId, VertexId>> edges_; // normalized u <= v, sorted
    VertexId next_id_ = 0;
};

/// Linear chain of weights; compared as an unoriented abstract graph.
struct Zigzag {
    std::vector<int> weights; // length >= 1

    bool operator==(const Zigzag& other) const;
};

enum class ChainKind { Standard, SemiStandard, Neither };

struct ChainClass {
    ChainKind kind = ChainKind::Neither;
    std::optional<int> w1; // the w_1 slot of a semi-standard chain

    bool operator==(const ChainClass&) const = default;
};

struct Segment {
    std::vector<VertexId> vertices; // in path order when linear
    bool is_outer = false;
};

struct CanonicalCode {
    std::string bytes;

    auto operator<=>(const CanonicalCode&) const = default;
};

ChainClass classify_chain(const Zigzag& z);
bool is_standard_circular(const std::vector<int>& cyclic_weights);

/// Connected components of g minus branch vertices (degree >= 3, loops twice)
/// and vertices of positive genus.
std::vector<Segment> segments(const WeightedGraph& g);

bool is_standard_graph(const WeightedGraph& g, bool semi);

/// Label-isomorphism-invariant code of a tree (weight, genus, role).
CanonicalCode canonical_code(const WeightedGraph& g);

// chain helpers
WeightedGraph make_chain(const std::vector<int>& weights, Role role = Role::Boundary);
/// Vertex ids in path order, if g is a linear chain (possibly a single vertex).
std::optional<std::vector<VertexId>> chain_order(const WeightedGraph& g);
std::optional<Zigzag> as_zigzag(const WeightedGraph& g);

} // namespace dg
