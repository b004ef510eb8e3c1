#include "dg/presentation.hpp"

#include <algorithm>
#include <set>

namespace dg {
namespace presentation {

const char* step_type_name(StepType t) {
    switch (t) {
    case StepType::FeatherOuter: return "outer-feather";
    case StepType::BoundaryOuter: return "outer-boundary";
    case StepType::Inner: return "inner";
    }
    return "?";
}

std::size_t BlowupSchedule::outer_count() const {
    std::size_t n = 0;
    for (const auto& s : steps)
        if (s.type != StepType::Inner) ++n;
    return n;
}

std::string BlowupSchedule::to_text() const {
    std::string out;
    for (const auto& s : steps) {
        out += step_type_name(s.type);
        out += " v" + std::to_string(s.creates);
        if (!s.name.empty()) out += "(" + s.name + ")";
        out += s.type == StepType::Inner
                   ? " on v" + std::to_string(s.target) + "-v" + std::to_string(*s.target2)
                   : " at v" + std::to_string(s.target);
        if (!s.slot.empty()) out += " slot " + s.slot;
        out += "\n";
    }
    return out;
}

OneSkeleton one_skeleton(const extended::NormalizedExtendedGraph& d, int genus) {
    std::optional<VertexId> section;
    for (const auto& v : d.boundary.vertices())
        if (v.role == Role::Section) section = v.id;
    if (!section) fail(ErrorCode::NoExtremalZero, "boundary has no section vertex");
    OneSkeleton sk;
    sk.section = *section;
    for (VertexId n : d.boundary.neighbors(*section)) {
        const auto& lbl = d.boundary.vertex(n);
        if (lbl.role == Role::FiberZero && lbl.weight == 0 && d.boundary.degree(n) == 1)
            sk.fiber_leaves.push_back(n);
        else
            sk.boundary_leaves.push_back(n);
    }
    if (sk.fiber_leaves.empty())
        fail(ErrorCode::NoExtremalZero, "no extremal 0-vertex at the section: not affine ruled");
    const auto& sec = d.boundary.vertex(*section);
    sk.graph.add_vertex_with_id(*section, -2 * genus, Role::Section, genus, sec.name);
    for (VertexId f : sk.fiber_leaves) {
        sk.graph.add_vertex_with_id(f, 0, Role::FiberZero, 0, d.boundary.vertex(f).name);
        sk.graph.add_edge(*section, f);
    }
    for (VertexId b : sk.boundary_leaves) {
        sk.graph.add_vertex_with_id(b, 0, Role::Boundary, 0, d.boundary.vertex(b).name);
        sk.graph.add_edge(*section, b);
    }
    return sk;
}

namespace {

std::string slot_for_vertex(const char* prefix, VertexId v) {
    return std::string(prefix) + "_v" + std::to_string(v);
}

int base_dimension(int genus) {
    if (genus <= 0) return 0;
    if (genus == 1) return 2;
    return 4 * genus - 2;
}

} // namespace

BlowupSchedule schedule_from(const extended::NormalizedExtendedGraph& d, int genus) {
    BlowupSchedule sched;
    sched.genus = genus;
    sched.skeleton = one_skeleton(d, genus);
    for (std::size_t i = 0; i < sched.skeleton.fiber_leaves.size(); ++i) {
        if (i == 0) continue; // the first full fiber sits at the marked point 0
        VertexId v = sched.skeleton.fiber_leaves[i];
        std::string slot = slot_for_vertex("p", v);
        sched.skeleton_slots.push_back(slot);
        sched.slot_leaf[slot] = v;
    }
    for (VertexId v : sched.skeleton.boundary_leaves) {
        std::string slot = slot_for_vertex("p", v);
        sched.skeleton_slots.push_back(slot);
        sched.slot_leaf[slot] = v;
    }

    WeightedGraph realized = d.realized();
    extended::ExtendedGraph e = extended::assemble(realized);
    extended::ContractionTranscript trans;
    try {
        trans = extended::contract_canonically(e);
    } catch (const Error& err) {
        fail(ErrorCode::NotRealizable, std::string("no creation schedule: ") + err.what());
    }

    // reverse the contraction into creation steps
    std::vector<ScheduleStep> pending;
    for (const auto& rounds : trans.per_fiber) {
        int total = static_cast<int>(rounds.size());
        for (int ri = 0; ri < total; ++ri) {
            for (const auto& entry : rounds[ri].contracted) {
                ScheduleStep s;
                s.creates = entry.v;
                const auto& lbl = realized.vertex(entry.v);
                s.role = lbl.role;
                s.name = lbl.name;
                s.creation_round = total - ri;
                if (entry.neighbors.size() == 1) {
                    s.target = entry.neighbors[0];
                    s.type = s.role == Role::Feather ? StepType::FeatherOuter
                                                     : StepType::BoundaryOuter;
                    s.slot = slot_for_vertex("s", s.creates);
                } else if (entry.neighbors.size() == 2) {
                    VertexId a = entry.neighbors[0], b = entry.neighbors[1];
                    // put the boundary endpoint first; it carries the chart at infinity
                    if (realized.vertex(a).role == Role::Feather &&
                        realized.vertex(b).role != Role::Feather)
                        std::swap(a, b);
                    s.target = a;
                    s.target2 = b;
                    s.type = StepType::Inner;
                } else {
                    fail(ErrorCode::NotRealizable, "contraction entry with no neighbors");
                }
                pending.push_back(std::move(s));
            }
        }
    }
    std::sort(pending.begin(), pending.end(), [](const ScheduleStep& a, const ScheduleStep& b) {
        return std::tie(a.creation_round, a.creates) < std::tie(b.creation_round, b.creates);
    });

    // feathers-first reorder: emit every ready feather step before the next
    // boundary step, so all feathers of a component precede later components
    std::set<VertexId> present;
    for (const auto& v : sched.skeleton.graph.vertices()) present.insert(v.id);
    std::vector<bool> done(pending.size(), false);
    auto ready = [&](const ScheduleStep& s) {
        if (!present.count(s.target)) return false;
        return !s.target2 || present.count(*s.target2) != 0;
    };
    while (sched.steps.size() < pending.size()) {
        std::size_t pick = pending.size();
        for (std::size_t i = 0; i < pending.size(); ++i)
            if (!done[i] && pending[i].role == Role::Feather && ready(pending[i])) {
                pick = i;
                break;
            }
        if (pick == pending.size())
            for (std::size_t i = 0; i < pending.size(); ++i)
                if (!done[i] && ready(pending[i])) {
                    pick = i;
                    break;
                }
        if (pick == pending.size())
            fail(ErrorCode::OrderingConflict, "no schedule step has its carriers created");
        done[pick] = true;
        present.insert(pending[pick].creates);
        sched.steps.push_back(pending[pick]);
    }

    // mandatory replay check against the realized target
    std::map<VertexId, int> weight;
    std::set<std::pair<VertexId, VertexId>> edges;
    for (const auto& v : sched.skeleton.graph.vertices()) weight[v.id] = v.weight;
    for (const auto& [a, b] : sched.skeleton.graph.edges()) edges.insert({a, b});
    auto add_edge = [&](VertexId a, VertexId b) { edges.insert(std::minmax(a, b)); };
    for (const auto& s : sched.steps) {
        weight[s.creates] = -1;
        if (s.type == StepType::Inner) {
            edges.erase(std::minmax(s.target, *s.target2));
            weight[s.target] -= 1;
            weight[*s.target2] -= 1;
            add_edge(s.target, s.creates);
            add_edge(*s.target2, s.creates);
        } else {
            weight[s.target] -= 1;
            add_edge(s.target, s.creates);
        }
    }
    std::map<VertexId, int> want;
    std::set<std::pair<VertexId, VertexId>> want_edges;
    for (const auto& v : realized.vertices())
        want[v.id] = v.role == Role::Section ? -2 * genus : v.weight;
    for (const auto& [a, b] : realized.edges()) want_edges.insert({a, b});
    if (weight != want || edges != want_edges)
        fail(ErrorCode::NotRealizable, "schedule replay does not reproduce the target graph");
    return sched;
}

int presentation_dimension(const extended::NormalizedExtendedGraph& d, int genus) {
    BlowupSchedule s = schedule_from(d, genus);
    return base_dimension(genus) + static_cast<int>(s.skeleton_slots.size()) +
           static_cast<int>(s.outer_count());
}

Instance instantiate(const BlowupSchedule& s, const std::map<std::string, Rational>& params) {
    auto param = [&](const std::string& slot) {
        auto it = params.find(slot);
        if (it == params.end())
            fail(ErrorCode::MissingCoordinates, "no value for slot " + slot);
        return it->second;
    };

    WeightedGraph g = s.skeleton.graph;
    // finite chart coordinates: meet[c][x] = coordinate of c's intersection
    // with x in the chart of c (missing entries sit at infinity)
    std::map<VertexId, std::map<VertexId, Rational>> meet;
    std::set<Rational> used_points{Rational(0)};
    for (std::size_t i = 1; i < s.skeleton.fiber_leaves.size(); ++i) {
        Rational p = param(slot_for_vertex("p", s.skeleton.fiber_leaves[i]));
        if (!used_points.insert(p).second)
            fail(ErrorCode::SlotViolation, "coincident skeleton points on the section");
        meet[s.skeleton.section][s.skeleton.fiber_leaves[i]] = p;
    }
    if (!s.skeleton.fiber_leaves.empty())
        meet[s.skeleton.section][s.skeleton.fiber_leaves[0]] = Rational(0);
    for (VertexId b : s.skeleton.boundary_leaves) {
        Rational p = param(slot_for_vertex("p", b));
        if (!used_points.insert(p).second)
            fail(ErrorCode::SlotViolation, "coincident skeleton points on the section");
        meet[s.skeleton.section][b] = p;
    }

    std::map<VertexId, std::size_t> fiber_of;
    for (std::size_t j = 0; j < s.skeleton.boundary_leaves.size(); ++j)
        fiber_of[s.skeleton.boundary_leaves[j]] = j;
    std::map<VertexId, Rational> base;
    auto is_boundary = [&](VertexId v) { return g.vertex(v).role != Role::Feather; };

    for (const auto& step : s.steps) {
        if (step.type == StepType::Inner) {
            VertexId u = step.target, w = *step.target2;
            if (!g.has_edge(u, w))
                fail(ErrorCode::SlotViolation,
                     "intersection to blow up vanished: v" + std::to_string(u) + "-v" +
                         std::to_string(w));
            g.add_vertex_with_id(step.creates, -1, step.role, 0, step.name);
            g.remove_edge(u, w);
            g.set_weight(u, g.vertex(u).weight - 1);
            g.set_weight(w, g.vertex(w).weight - 1);
            g.add_edge(u, step.creates);
            g.add_edge(w, step.creates);
            // the blown-up point keeps its chart coordinate on both carriers
            for (VertexId c : {u, w}) {
                VertexId other = c == u ? w : u;
                auto it = meet[c].find(other);
                if (it != meet[c].end()) {
                    meet[c][step.creates] = it->second;
                    meet[c].erase(it);
                }
            }
            meet[step.creates][w] = Rational(0); // target carries the chart at infinity
            fiber_of[step.creates] = fiber_of.at(u);
            if (step.role == Role::Feather) {
                VertexId heir = !is_boundary(w) ? w : u;
                if (is_boundary(heir))
                    fail(ErrorCode::NoBoundaryNeighbor,
                         "inner feather step between two boundary components");
                base[step.creates] = base.at(heir);
            }
        } else {
            VertexId x = step.target;
            Rational p = param(step.slot);
            std::optional<VertexId> hit;
            for (const auto& [other, coord] : meet[x])
                if (coord == p) hit = other;
            g.add_vertex_with_id(step.creates, -1, step.role, 0, step.name);
            g.set_weight(x, g.vertex(x).weight - 1);
            g.add_edge(x, step.creates);
            if (hit) {
                if (is_boundary(*hit))
                    fail(ErrorCode::SlotViolation,
                         "center of " + step.slot + " lies on a boundary intersection");
                // jumping feather: the center lies on *hit, which moves up
                // onto the created curve
                g.remove_edge(x, *hit);
                g.set_weight(*hit, g.vertex(*hit).weight - 1);
                g.add_edge(*hit, step.creates);
                meet[x].erase(*hit);
                meet[step.creates][*hit] = Rational(0);
            }
            meet[x][step.creates] = p;
            fiber_of[step.creates] = fiber_of.at(x);
            if (step.role == Role::Feather) base[step.creates] = p;
        }
    }

    Instance inst;
    inst.ext.graph = std::move(g);
    inst.ext.section = s.skeleton.section;
    inst.ext.full_fibers = s.skeleton.fiber_leaves;
    std::vector<extended::Fiber> fibers(s.skeleton.boundary_leaves.size());
    for (std::size_t j = 0; j < fibers.size(); ++j)
        fibers[j].distinguished = s.skeleton.boundary_leaves[j];
    for (const auto& [v, j] : fiber_of) fibers[j].members.push_back(v);
    for (auto& f : fibers) std::sort(f.members.begin(), f.members.end());
    inst.ext.fibers = std::move(fibers);
    inst.ext.check_structure();
    inst.coords = std::move(base);
    return inst;
}

} // namespace presentation
} // namespace dg
