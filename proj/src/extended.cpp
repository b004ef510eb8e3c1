#include "dg/extended.hpp"

#include <algorithm>
#include <set>

#include "dg/surgery.hpp"

namespace dg {
namespace extended {

namespace {

bool is_boundary_role(Role r) {
    return r == Role::Boundary || r == Role::FiberZero || r == Role::Section;
}

} // namespace

void ExtendedGraph::check_structure() const {
    graph.require_tree("extended graph");
    if (!graph.has_vertex(section) || graph.vertex(section).role != Role::Section)
        fail(ErrorCode::Validation, "section vertex missing or mislabeled");
    for (const auto& v : graph.vertices())
        if (v.role == Role::Section && v.id != section)
            fail(ErrorCode::Validation, "more than one section vertex");

    std::set<VertexId> in_fiber;
    for (const auto& f : fibers) {
        if (std::find(f.members.begin(), f.members.end(), f.distinguished) == f.members.end())
            fail(ErrorCode::Validation, "distinguished vertex not among fiber members");
        if (!graph.has_edge(f.distinguished, section))
            fail(ErrorCode::Validation, "distinguished vertex must meet the section");
        for (VertexId m : f.members) {
            if (!in_fiber.insert(m).second)
                fail(ErrorCode::Validation, "fibers must be disjoint");
            if (m == section) fail(ErrorCode::Validation, "section cannot lie in a fiber");
            // only the distinguished vertex touches anything outside the fiber
            for (VertexId n : graph.neighbors(m)) {
                bool inside = std::find(f.members.begin(), f.members.end(), n) != f.members.end();
                if (!inside && !(m == f.distinguished && n == section))
                    fail(ErrorCode::Validation, "fiber attached other than through C_2j");
            }
        }
    }
    for (VertexId c0 : full_fibers) {
        const auto& v = graph.vertex(c0);
        if (v.role != Role::FiberZero || v.weight != 0 || graph.degree(c0) != 1 ||
            !graph.has_edge(c0, section))
            fail(ErrorCode::Validation, "full fiber must be an extremal 0-vertex at the section");
    }
    // every feather and every non-full-fiber boundary component lies in a fiber
    for (const auto& v : graph.vertices()) {
        if (v.role == Role::Feather && !in_fiber.count(v.id))
            fail(ErrorCode::Validation, "feather vertex outside every fiber");
        if (v.role == Role::Boundary && !in_fiber.count(v.id))
            fail(ErrorCode::Validation, "fiber component outside every fiber");
    }
    // feathers: connected components of (graph - boundary) are chains with a
    // unique vertex meeting the boundary
    std::set<VertexId> seen;
    for (const auto& v : graph.vertices()) {
        if (v.role != Role::Feather || seen.count(v.id)) continue;
        std::vector<VertexId> comp, stack{v.id};
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            if (!seen.insert(x).second) continue;
            comp.push_back(x);
            for (VertexId n : graph.neighbors(x))
                if (graph.vertex(n).role == Role::Feather && !seen.count(n))
                    stack.push_back(n);
        }
        int bridges = 0;
        for (VertexId x : comp) {
            std::size_t feather_deg = 0;
            bool meets_boundary = false;
            for (VertexId n : graph.neighbors(x)) {
                if (graph.vertex(n).role == Role::Feather)
                    ++feather_deg;
                else
                    meets_boundary = true;
            }
            if (feather_deg > 2) fail(ErrorCode::Validation, "feather is not a linear chain");
            if (meets_boundary) ++bridges;
        }
        if (bridges != 1)
            fail(ErrorCode::Validation, "feather must meet the boundary in exactly one bridge");
    }
}

ExtendedGraph assemble(const WeightedGraph& g) {
    g.require_tree("assemble extended graph");
    ExtendedGraph e;
    e.graph = g;
    std::optional<VertexId> section;
    for (const auto& v : g.vertices())
        if (v.role == Role::Section) {
            if (section) fail(ErrorCode::Validation, "more than one section vertex");
            section = v.id;
        }
    if (!section) fail(ErrorCode::Validation, "no section vertex");
    e.section = *section;
    std::vector<VertexId> fiber_roots;
    for (VertexId n : g.neighbors(e.section)) {
        if (g.vertex(n).role == Role::FiberZero)
            e.full_fibers.push_back(n);
        else
            fiber_roots.push_back(n);
    }
    // each fiber is the connected component hanging off the section at a root
    for (VertexId root : fiber_roots) {
        Fiber f;
        f.distinguished = root;
        std::vector<VertexId> stack{root};
        std::set<VertexId> seen{e.section};
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            if (!seen.insert(x).second) continue;
            f.members.push_back(x);
            for (VertexId n : g.neighbors(x)) stack.push_back(n);
        }
        std::sort(f.members.begin(), f.members.end());
        e.fibers.push_back(std::move(f));
    }
    e.check_structure();
    return e;
}

FiberReport validate(const ExtendedGraph& e) {
    e.check_structure();
    FiberReport report;
    report.valid = true;
    for (const auto& f : e.fibers) {
        FiberReport::PerFiber pf;
        // simulate on the induced subtree with original ids
        std::set<VertexId> members(f.members.begin(), f.members.end());
        std::map<VertexId, int> weight;
        std::map<VertexId, std::set<VertexId>> adj;
        for (VertexId m : f.members) weight[m] = e.graph.vertex(m).weight;
        for (const auto& [a, b] : e.graph.edges())
            if (members.count(a) && members.count(b)) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        std::set<VertexId> alive(members);
        while (alive.size() > 1 || weight[f.distinguished] != 0) {
            std::vector<VertexId> ready;
            for (VertexId v : alive)
                if (v != f.distinguished && weight[v] == -1 && adj[v].size() <= 2)
                    ready.push_back(v);
            if (ready.empty()) {
                pf.ok = false;
                pf.reason = alive.size() > 1 ? "contraction stalls"
                                             : "distinguished vertex ends at nonzero weight";
                break;
            }
            // Remark 2.16 side condition: the simultaneous round must not
            // contain adjacent (-1)-vertices
            for (std::size_t i = 0; i < ready.size() && pf.reason.empty(); ++i)
                for (std::size_t j = i + 1; j < ready.size(); ++j)
                    if (adj[ready[i]].count(ready[j])) {
                        pf.ok = false;
                        pf.reason = "two (-1)-components adjacent in a round";
                        break;
                    }
            if (!pf.reason.empty()) break;
            ContractionRound round;
            for (VertexId v : ready) {
                ContractionRound::Entry entry;
                entry.v = v;
                entry.neighbors.assign(adj[v].begin(), adj[v].end());
                round.contracted.push_back(entry);
            }
            for (VertexId v : ready) {
                std::vector<VertexId> ns(adj[v].begin(), adj[v].end());
                for (VertexId n : ns) {
                    weight[n] += 1;
                    adj[n].erase(v);
                }
                if (ns.size() == 2) {
                    adj[ns[0]].insert(ns[1]);
                    adj[ns[1]].insert(ns[0]);
                }
                adj.erase(v);
                alive.erase(v);
            }
            pf.rounds.push_back(std::move(round));
        }
        if (pf.reason.empty() && alive.size() == 1 && weight[f.distinguished] == 0) pf.ok = true;
        if (pf.ok) {
            // multiplicities by reverse replay: an outer-created vertex copies
            // its parent's multiplicity, an inner-created one sums both
            pf.multiplicities[f.distinguished] = 1;
            for (auto rit = pf.rounds.rbegin(); rit != pf.rounds.rend(); ++rit)
                for (const auto& entry : rit->contracted) {
                    int m = 0;
                    for (VertexId n : entry.neighbors) m += pf.multiplicities[n];
                    pf.multiplicities[entry.v] = m;
                }
        }
        report.valid = report.valid && pf.ok;
        report.fibers.push_back(std::move(pf));
    }
    return report;
}

std::size_t ContractionTranscript::total_blowdowns() const {
    std::size_t n = 0;
    for (const auto& rounds : per_fiber)
        for (const auto& r : rounds) n += r.contracted.size();
    return n;
}

ContractionTranscript contract_canonically(const ExtendedGraph& e) {
    FiberReport report = validate(e);
    if (!report.valid) {
        std::string why;
        for (const auto& pf : report.fibers)
            if (!pf.ok) why = pf.reason;
        fail(ErrorCode::InvalidExtendedGraph, why.empty() ? "invalid fiber" : why);
    }
    ContractionTranscript t;
    for (auto& pf : report.fibers) t.per_fiber.push_back(std::move(pf.rounds));
    return t;
}

MotherAssignment mother_map(const ExtendedGraph& e) {
    ContractionTranscript t = contract_canonically(e);
    MotherAssignment a;
    // uncontracted boundary vertices are +-components
    a.kind[e.section] = ComponentKind::Plus;
    for (VertexId c0 : e.full_fibers) a.kind[c0] = ComponentKind::Plus;
    for (const auto& f : e.fibers) a.kind[f.distinguished] = ComponentKind::Plus;

    std::vector<std::pair<VertexId, VertexId>> same_point; // (feather, feather) links
    for (std::size_t fi = 0; fi < e.fibers.size(); ++fi) {
        for (const auto& round : t.per_fiber[fi]) {
            for (const auto& entry : round.contracted) {
                const auto& lbl = e.graph.vertex(entry.v);
                if (lbl.role == Role::Feather) {
                    std::optional<VertexId> mother;
                    for (VertexId n : entry.neighbors) {
                        if (is_boundary_role(e.graph.vertex(n).role)) {
                            if (mother)
                                fail(ErrorCode::NoBoundaryNeighbor,
                                     "feather contracted between two boundary components");
                            mother = n;
                        } else {
                            same_point.emplace_back(entry.v, n);
                        }
                    }
                    if (!mother)
                        fail(ErrorCode::NoBoundaryNeighbor,
                             "feather vertex " + std::to_string(entry.v) +
                                 " contracted with no boundary neighbor");
                    a.mother[entry.v] = *mother;
                } else {
                    int boundary_neighbors = 0;
                    for (VertexId n : entry.neighbors)
                        if (is_boundary_role(e.graph.vertex(n).role)) ++boundary_neighbors;
                    a.kind[entry.v] = boundary_neighbors == 2 ? ComponentKind::Star
                                                              : ComponentKind::Plus;
                }
            }
        }
    }
    // base-point classes: union of feathers contracted onto one another with a
    // common mother (same-mother chains land on the same point)
    std::map<VertexId, VertexId> parent;
    for (const auto& [v, m] : a.mother) parent[v] = v;
    auto find = [&](VertexId v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [u, v] : same_point)
        if (a.mother.count(u) && a.mother.count(v) && a.mother[u] == a.mother[v])
            parent[find(u)] = find(v);
    std::map<VertexId, int> class_id;
    for (const auto& [v, m] : a.mother) {
        VertexId root = find(v);
        auto it = class_id.find(root);
        if (it == class_id.end())
            it = class_id.emplace(root, static_cast<int>(class_id.size())).first;
        a.base_point_class[v] = it->second;
    }
    return a;
}

WeightedGraph NormalizedExtendedGraph::realized() const {
    WeightedGraph g = boundary;
    for (const auto& [c, d] : delta)
        for (int i = 0; i < d; ++i) {
            VertexId f = g.add_vertex(-1, Role::Feather);
            g.add_edge(c, f);
        }
    return g;
}

CanonicalCode NormalizedExtendedGraph::code() const { return canonical_code(realized()); }

NormalizedExtendedGraph normalize(const ExtendedGraph& e) {
    MotherAssignment a = mother_map(e);
    NormalizedExtendedGraph out;
    std::map<VertexId, VertexId> to_new;
    for (const auto& v : e.graph.vertices())
        if (is_boundary_role(v.role))
            to_new[v.id] = out.boundary.add_vertex(v.weight, v.role, v.genus, v.name);
    for (const auto& [x, y] : e.graph.edges())
        if (to_new.count(x) && to_new.count(y)) out.boundary.add_edge(to_new[x], to_new[y]);
    for (const auto& [c, _] : to_new) out.delta[to_new[c]] = 0;
    for (const auto& [f, m] : a.mother) out.delta[to_new.at(m)] += 1;
    return out;
}

ExtendedGraph elem_outer_at_full_fiber(const ExtendedGraph& e, VertexId c0i) {
    auto it = std::find(e.full_fibers.begin(), e.full_fibers.end(), c0i);
    if (it == e.full_fibers.end())
        fail(ErrorCode::SiteMissing, "not a full fiber vertex: " + std::to_string(c0i));
    auto [g, step] = surgery::elementary_transform(e.graph, c0i, surgery::Outer{});
    ExtendedGraph out = e;
    out.graph = std::move(g);
    *(out.full_fibers.begin() + (it - e.full_fibers.begin())) =
        std::get<surgery::ElemOuter>(step).created;
    return out;
}

} // namespace extended
} // namespace dg
