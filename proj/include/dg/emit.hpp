#pragma once

#include <string>

#include "dg/extended.hpp"
#include "dg/invariants.hpp"

namespace dg {
namespace emit {

/// Deterministic Graphviz source: vertices in id order, feathers dashed,
/// the section doubled.
std::string emit_dot(const WeightedGraph& g);

/// Canonical JSON (sorted keys, rationals as "p/q" strings).
std::string graph_json(const WeightedGraph& g);
std::string normalized_json(const extended::NormalizedExtendedGraph& d);
std::string invariant_json(const invariants::ConfigurationInvariant& inv);
std::string error_json(ErrorCode code, const std::string& message);

} // namespace emit
} // namespace dg
