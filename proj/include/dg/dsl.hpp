#pragma once

#include <map>
#include <string>
#include <vector>

#include "dg/extended.hpp"
#include "dg/rational.hpp"

namespace dg {
namespace dsl {

struct InstanceDecl {
    std::string schedule_of; // name of a normalized item
    int genus = 0;
    std::map<std::string, Rational> params;
};

enum class ItemKind { Zigzag, Graph, Extended, Normalized, Instance };

struct Document {
    std::vector<std::pair<ItemKind, std::string>> order; // declaration order
    std::map<std::string, Zigzag> zigzags;
    std::map<std::string, WeightedGraph> graphs;
    std::map<std::string, extended::ExtendedGraph> extendeds;
    std::map<std::string, extended::NormalizedExtendedGraph> normalizeds;
    std::map<std::string, InstanceDecl> instances;
    // per graph-like item: declared vertex name -> id
    std::map<std::string, std::map<std::string, VertexId>> vertex_names;
    // extended/normalized item -> name of the graph item its boundary came from
    std::map<std::string, std::string> boundary_ref;

    bool has(const std::string& name) const;
};

Document parse(const std::string& text);
std::string print(const Document& doc);

} // namespace dsl
} // namespace dg
