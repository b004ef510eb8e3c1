#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dg/extended.hpp"
#include "dg/rational.hpp"

namespace dg {
namespace presentation {

/// Star of the section and its neighbors; the seed of every blowup schedule.
struct OneSkeleton {
    WeightedGraph graph; // vertex ids match the target's boundary
    VertexId section = 0;
    std::vector<VertexId> fiber_leaves;    // full-fiber 0-vertices
    std::vector<VertexId> boundary_leaves; // distinguished fiber roots
};

enum class StepType {
    FeatherOuter,  // creates a feather component at a point of its mother
    BoundaryOuter, // creates a boundary component at a point of an existing one
    Inner,         // blowup of an intersection point; consumes no parameter
};
const char* step_type_name(StepType t);

struct ScheduleStep {
    StepType type = StepType::FeatherOuter;
    VertexId target = 0;              // outer: carrier of the center; inner: one endpoint
    std::optional<VertexId> target2;  // inner only: the other endpoint
    VertexId creates = 0;
    Role role = Role::Feather;
    std::string name; // display name of the created vertex
    int creation_round = 0;
    std::string slot; // parameter slot name; empty for inner steps
};

struct BlowupSchedule {
    OneSkeleton skeleton;
    int genus = 0;
    std::vector<ScheduleStep> steps;
    std::vector<std::string> skeleton_slots; // one per leaf except the first fiber leaf
    std::map<std::string, VertexId> slot_leaf; // skeleton slot -> leaf it positions

    std::size_t outer_count() const;
    std::string to_text() const; // transcript-style, one step per line
};

OneSkeleton one_skeleton(const extended::NormalizedExtendedGraph& d, int genus);

/// Reverse-engineers a creation schedule from the canonical contraction of the
/// realized graph; verified by replay before returning.
BlowupSchedule schedule_from(const extended::NormalizedExtendedGraph& d, int genus);

int presentation_dimension(const extended::NormalizedExtendedGraph& d, int genus);

struct Instance {
    extended::ExtendedGraph ext;
    std::map<VertexId, Rational> coords; // feather vertex -> base point on its mother
};

/// Replays the schedule with exact-rational centers. A center that lands on an
/// existing feather transfers that feather onto the created curve (a jumping
/// feather); a center on a boundary intersection is a SlotViolation.
Instance instantiate(const BlowupSchedule& s, const std::map<std::string, Rational>& params);

} // namespace presentation
} // namespace dg
