#include "dg/invariants.hpp"

#include <algorithm>

namespace dg {
namespace invariants {

const char* witness_name(Witness w) {
    switch (w) {
    case Witness::DirectIso: return "DirectIso";
    case Witness::ReversedIso: return "ReversedIso";
    case Witness::GenusMismatch: return "GenusMismatch";
    case Witness::GraphMismatch: return "GraphMismatch";
    }
    return "?";
}

PointConfig canonical_config(const PointConfig& c) {
    PointConfig out;
    out.kind = c.kind;
    if (c.kind == ComponentKind::Star) {
        for (const auto& p : c.points)
            if (p.is_zero()) fail(ErrorCode::ZeroPointInStar, "0 is not in the chart of a *-component");
        if (c.points.empty()) return out;
        std::vector<Rational> best;
        for (const auto& p : c.points) {
            std::vector<Rational> cand;
            cand.reserve(c.points.size());
            for (const auto& q : c.points) cand.push_back(q / p);
            std::sort(cand.begin(), cand.end());
            if (best.empty() || cand < best) best = std::move(cand);
        }
        out.points = std::move(best);
        return out;
    }
    // Plus: affine maps z -> az + b
    if (c.points.size() <= 1) {
        if (!c.points.empty()) out.points.push_back(Rational(0));
        return out;
    }
    bool all_equal = std::all_of(c.points.begin(), c.points.end(),
                                 [&](const Rational& p) { return p == c.points.front(); });
    if (all_equal) {
        out.points.assign(c.points.size(), Rational(0));
        return out;
    }
    std::vector<Rational> best;
    for (const auto& p : c.points)
        for (const auto& q : c.points) {
            if (p == q) continue;
            // the affine map sending p -> 0, q -> 1
            std::vector<Rational> cand;
            cand.reserve(c.points.size());
            for (const auto& x : c.points) cand.push_back((x - p) / (q - p));
            std::sort(cand.begin(), cand.end());
            if (best.empty() || cand < best) best = std::move(cand);
        }
    out.points = std::move(best);
    return out;
}

ConfigurationInvariant configuration_invariant(const ExtendedGraph& e,
                                               const std::map<VertexId, Rational>& coords) {
    extended::MotherAssignment a = extended::mother_map(e);
    std::map<VertexId, PointConfig> raw;
    for (const auto& [f, m] : a.mother) {
        auto it = coords.find(f);
        if (it == coords.end())
            fail(ErrorCode::MissingCoordinates,
                 "no base-point coordinate for feather vertex " + std::to_string(f));
        auto kit = a.kind.find(m);
        ComponentKind kind = kit == a.kind.end() ? ComponentKind::Plus : kit->second;
        raw[m].kind = kind;
        raw[m].points.push_back(it->second);
    }
    ConfigurationInvariant inv;
    for (auto& [m, cfg] : raw) inv.entries[m] = canonical_config(cfg);
    return inv;
}

std::string ConfigurationInvariant::str() const {
    std::string s;
    for (const auto& [v, cfg] : entries) {
        s += "v" + std::to_string(v) + ": ";
        s += cfg.kind == ComponentKind::Star ? "star" : "plus";
        s += " {";
        for (std::size_t i = 0; i < cfg.points.size(); ++i) {
            if (i) s += ",";
            s += cfg.points[i].str();
        }
        s += "}\n";
    }
    return s;
}

namespace {

// chain order of a [[0,0,w_2..w_n]] boundary, zero pair first
std::vector<VertexId> gizatullin_order(const WeightedGraph& g) {
    auto order = chain_order(g);
    if (!order) fail(ErrorCode::NotAZigzag, "boundary is not a linear chain");
    auto w = [&](std::size_t i) { return g.vertex((*order)[i]).weight; };
    if (order->size() < 2) fail(ErrorCode::NotAZigzag, "boundary too short for a zero pair");
    if (!(w(0) == 0 && w(1) == 0)) {
        std::reverse(order->begin(), order->end());
        if (!(w(0) == 0 && w(1) == 0))
            fail(ErrorCode::NotAZigzag, "boundary has no leading zero pair");
    }
    return *order;
}

} // namespace

NormalizedExtendedGraph reverse_normalized(const NormalizedExtendedGraph& d) {
    std::vector<VertexId> order = gizatullin_order(d.boundary);
    std::size_t n = order.size() - 1; // vertices C_0..C_n
    NormalizedExtendedGraph out;
    std::vector<VertexId> new_ids(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t src = i <= 1 ? i : n - i + 2; // i-vee transport
        const auto& lbl = d.boundary.vertex(order[src]);
        new_ids[i] = out.boundary.add_vertex(lbl.weight, lbl.role, lbl.genus, lbl.name);
        auto dit = d.delta.find(order[src]);
        out.delta[new_ids[i]] = dit == d.delta.end() ? 0 : dit->second;
    }
    for (std::size_t i = 0; i + 1 < order.size(); ++i) out.boundary.add_edge(new_ids[i], new_ids[i + 1]);
    return out;
}

Verdict decide_equivalence(const NormalizedExtendedGraph& d1, int genus1,
                           const NormalizedExtendedGraph& d2, int genus2) {
    if (genus1 != genus2) return {false, Witness::GenusMismatch};
    CanonicalCode c1 = d1.code();
    if (c1 == d2.code()) return {true, Witness::DirectIso};
    try {
        if (c1 == reverse_normalized(d2).code()) return {true, Witness::ReversedIso};
    } catch (const Error&) {
        // non-zigzag boundary admits no reversion
    }
    return {false, Witness::GraphMismatch};
}

FeatherData match_feather_data(const FeatherData& fd, int n) {
    FeatherData out;
    for (const auto& [t, p, m] : fd) {
        if (t < 2 || t > n)
            fail(ErrorCode::IndexOutOfRange,
                 "mother index " + std::to_string(t) + " outside 2.." + std::to_string(n));
        out.push_back({n - t + 2, p, m});
    }
    return out;
}

ConfigSpaceDim config_space_dim(const NormalizedExtendedGraph& d,
                                const std::map<VertexId, ComponentKind>& kinds) {
    ConfigSpaceDim out;
    for (const auto& [v, delta] : d.delta) {
        auto kit = kinds.find(v);
        ComponentKind kind = kit == kinds.end() ? ComponentKind::Plus : kit->second;
        int dim_aut = kind == ComponentKind::Plus ? 2 : 1;
        int dim = std::max(0, delta - dim_aut);
        out.per_component[v] = dim;
        out.total += dim;
    }
    return out;
}

} // namespace invariants
} // namespace dg
