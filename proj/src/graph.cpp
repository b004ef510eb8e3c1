#include "dg/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dg {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::SiteMissing: return "SiteMissing";
    case ErrorCode::NotMinusOne: return "NotMinusOne";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::NotZeroVertex: return "NotZeroVertex";
    case ErrorCode::WrongDegree: return "WrongDegree";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::LoopsUnsupported: return "LoopsUnsupported";
    case ErrorCode::InvalidExtendedGraph: return "InvalidExtendedGraph";
    case ErrorCode::NoBoundaryNeighbor: return "NoBoundaryNeighbor";
    case ErrorCode::ZeroPointInStar: return "ZeroPointInStar";
    case ErrorCode::MissingCoordinates: return "MissingCoordinates";
    case ErrorCode::NotAZigzag: return "NotAZigzag";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoExtremalZero: return "NoExtremalZero";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::OrderingConflict: return "OrderingConflict";
    case ErrorCode::SlotViolation: return "SlotViolation";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::Validation: return "Validation";
    }
    return "Unknown";
}

const char* role_name(Role r) {
    switch (r) {
    case Role::Section: return "section";
    case Role::FiberZero: return "fiber0";
    case Role::Boundary: return "boundary";
    case Role::Feather: return "feather";
    }
    return "?";
}

VertexId WeightedGraph::add_vertex(int weight, Role role, int genus, std::string name) {
    if (genus < 0) fail(ErrorCode::Validation, "genus must be non-negative");
    if (genus > 0 && role != Role::Section)
        fail(ErrorCode::Validation, "genus > 0 is only allowed on the section");
    VertexId id = next_id_++;
    verts_.push_back(VertexLabel{id, weight, genus, role, std::move(name)});
    return id;
}

VertexId WeightedGraph::add_vertex_with_id(VertexId id, int weight, Role role, int genus,
                                           std::string name) {
    if (genus < 0) fail(ErrorCode::Validation, "genus must be non-negative");
    if (genus > 0 && role != Role::Section)
        fail(ErrorCode::Validation, "genus > 0 is only allowed on the section");
    auto it = std::lower_bound(verts_.begin(), verts_.end(), id,
                               [](const VertexLabel& a, VertexId b) { return a.id < b; });
    if (it != verts_.end() && it->id == id)
        fail(ErrorCode::DuplicateName, "vertex id " + std::to_string(id) + " already present");
    verts_.insert(it, VertexLabel{id, weight, genus, role, std::move(name)});
    if (id >= next_id_) next_id_ = id + 1;
    return id;
}

std::size_t WeightedGraph::index_of(VertexId v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v,
                               [](const VertexLabel& a, VertexId b) { return a.id < b; });
    if (it == verts_.end() || it->id != v)
        fail(ErrorCode::SiteMissing, "no vertex " + std::to_string(v));
    return static_cast<std::size_t>(it - verts_.begin());
}

bool WeightedGraph::has_vertex(VertexId v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v,
                               [](const VertexLabel& a, VertexId b) { return a.id < b; });
    return it != verts_.end() && it->id == v;
}

void WeightedGraph::add_edge(VertexId u, VertexId v) {
    index_of(u);
    index_of(v);
    if (u > v) std::swap(u, v);
    auto e = std::make_pair(u, v);
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
}

bool WeightedGraph::has_edge(VertexId u, VertexId v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

void WeightedGraph::remove_edge(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    auto e = std::make_pair(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
        fail(ErrorCode::SiteMissing, "no edge " + std::to_string(u) + "-" + std::to_string(v));
    edges_.erase(it);
}

void WeightedGraph::remove_vertex(VertexId v) {
    auto idx = index_of(v);
    verts_.erase(verts_.begin() + static_cast<std::ptrdiff_t>(idx));
    std::erase_if(edges_, [v](const auto& e) { return e.first == v || e.second == v; });
}

void WeightedGraph::set_weight(VertexId v, int w) { verts_[index_of(v)].weight = w; }

const VertexLabel& WeightedGraph::vertex(VertexId v) const { return verts_[index_of(v)]; }
VertexLabel& WeightedGraph::vertex_mut(VertexId v) { return verts_[index_of(v)]; }

std::vector<VertexId> WeightedGraph::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t WeightedGraph::degree(VertexId v) const {
    std::size_t d = 0;
    for (const auto& [a, b] : edges_) {
        if (a == v) ++d;
        if (b == v) ++d;
    }
    return d;
}

bool WeightedGraph::has_loop_or_multiedge() const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].first == edges_[i].second) return true;
        if (i > 0 && edges_[i] == edges_[i - 1]) return true;
    }
    return false;
}

bool WeightedGraph::is_tree() const {
    if (verts_.empty()) return true;
    if (has_loop_or_multiedge()) return false;
    if (edges_.size() != verts_.size() - 1) return false;
    // right edge count and no cycles (union-find) implies connected
    std::vector<std::uint32_t> root(verts_.size());
    for (std::uint32_t i = 0; i < root.size(); ++i) root[i] = i;
    auto find = [&](std::uint32_t x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    for (const auto& [u, v] : edges_) {
        std::uint32_t a = find(static_cast<std::uint32_t>(index_of(u)));
        std::uint32_t b = find(static_cast<std::uint32_t>(index_of(v)));
        if (a == b) return false;
        root[a] = b;
    }
    return true;
}

void WeightedGraph::require_tree(const char* op) const {
    if (!is_tree()) fail(ErrorCode::NotATree, std::string(op) + " requires a tree");
}

bool Zigzag::operator==(const Zigzag& other) const {
    if (weights == other.weights) return true;
    std::vector<int> rev(other.weights.rbegin(), other.weights.rend());
    return weights == rev;
}

namespace {

// oriented reading of eq. (1)
bool standard_oriented(const std::vector<int>& w) {
    std::size_t n = w.size();
    bool all_zero = std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
    if (all_zero) return n >= 1 && n <= 3;
    auto tail_le2 = [&](std::size_t from) {
        for (std::size_t i = from; i < n; ++i)
            if (w[i] > -2) return false;
        return true;
    };
    if (tail_le2(0)) return true;                            // [[w_2,...,w_n]], n >= 2
    if (n >= 3 && w[0] == 0 && w[1] == 0 && tail_le2(2)) return true; // [[0,0,w_2,...]]
    return false;
}

// the extra shapes of eq. (2); returns the w_1 slot when matched
std::optional<int> semi_extra_oriented(const std::vector<int>& w) {
    std::size_t n = w.size();
    if (n >= 2 && w[0] == 0) {
        if (n == 3 && w[2] == 0) return w[1]; // [[0,w_1,0]]
        bool ok = true;
        for (std::size_t i = 2; i < n; ++i)
            if (w[i] > -2) { ok = false; break; }
        if (ok) return w[1]; // [[0,w_1,w_2,...,w_n]]
    }
    return std::nullopt;
}

} // namespace

ChainClass classify_chain(const Zigzag& z) {
    const auto& w = z.weights;
    std::vector<int> rev(w.rbegin(), w.rend());
    if (standard_oriented(w) || standard_oriented(rev)) return {ChainKind::Standard, {}};
    if (auto w1 = semi_extra_oriented(w)) return {ChainKind::SemiStandard, w1};
    if (auto w1 = semi_extra_oriented(rev)) return {ChainKind::SemiStandard, w1};
    return {ChainKind::Neither, {}};
}

namespace {

bool circular_shape_oriented(const std::vector<int>& w) {
    std::size_t n = w.size();
    auto all_le2 = [&](std::size_t from) {
        for (std::size_t i = from; i < n; ++i)
            if (w[i] > -2) return false;
        return true;
    };
    if (n >= 1 && all_le2(0)) return true;                     // ((w_1,...,w_n))
    if (n >= 3 && w[0] == 0 && w[1] == 0 && all_le2(2)) return true; // ((0,0,w_1,...))
    // ((0_l, w)), 0 <= l <= 3, w <= 0
    if (n >= 1 && n <= 4 && w.back() <= 0 &&
        std::all_of(w.begin(), w.end() - 1, [](int x) { return x == 0; }))
        return true;
    if (w == std::vector<int>{0, 0, -1, -1}) return true;
    return false;
}

} // namespace

bool is_standard_circular(const std::vector<int>& cyclic) {
    std::size_t n = cyclic.size();
    if (n == 0) return false;
    for (int refl = 0; refl < 2; ++refl) {
        std::vector<int> base = cyclic;
        if (refl) std::reverse(base.begin(), base.end());
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<int> rot(n);
            for (std::size_t i = 0; i < n; ++i) rot[i] = base[(i + r) % n];
            if (circular_shape_oriented(rot)) return true;
        }
    }
    return false;
}

std::vector<Segment> segments(const WeightedGraph& g) {
    std::set<VertexId> removed;
    for (const auto& v : g.vertices())
        if (g.degree(v.id) >= 3 || v.genus > 0) removed.insert(v.id);

    std::set<VertexId> seen;
    std::vector<Segment> out;
    for (const auto& v : g.vertices()) {
        if (removed.count(v.id) || seen.count(v.id)) continue;
        // flood the component of g - removed
        std::vector<VertexId> comp, stack{v.id};
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            if (removed.count(x) || !seen.insert(x).second) continue;
            comp.push_back(x);
            for (VertexId n : g.neighbors(x))
                if (!removed.count(n) && !seen.count(n)) stack.push_back(n);
        }
        Segment s;
        s.is_outer = false;
        for (VertexId x : comp)
            if (g.degree(x) <= 1) s.is_outer = true;
        // order as a path when possible (within the induced subgraph)
        auto deg_in = [&](VertexId x) {
            std::size_t d = 0;
            for (VertexId n : g.neighbors(x))
                if (!removed.count(n)) ++d;
            return d;
        };
        VertexId start = comp.front();
        for (VertexId x : comp)
            if (deg_in(x) <= 1 && x < start) start = x;
        for (VertexId x : comp)
            if (deg_in(x) <= 1 && deg_in(start) > 1) start = x;
        std::set<VertexId> in_comp(comp.begin(), comp.end());
        std::vector<VertexId> path{start};
        std::set<VertexId> used{start};
        while (path.size() < comp.size()) {
            bool advanced = false;
            for (VertexId n : g.neighbors(path.back())) {
                if (in_comp.count(n) && !used.count(n)) {
                    path.push_back(n);
                    used.insert(n);
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break; // not a path (cannot happen for trees)
        }
        s.vertices = path.size() == comp.size() ? path : comp;
        out.push_back(std::move(s));
    }
    return out;
}

bool is_standard_graph(const WeightedGraph& g, bool semi) {
    for (const auto& seg : segments(g)) {
        // a segment of a tree is a path; reject anything else
        std::set<VertexId> in_seg(seg.vertices.begin(), seg.vertices.end());
        Zigzag z;
        for (std::size_t i = 0; i < seg.vertices.size(); ++i) {
            z.weights.push_back(g.vertex(seg.vertices[i]).weight);
            if (i + 1 < seg.vertices.size() &&
                !g.has_edge(seg.vertices[i], seg.vertices[i + 1]))
                return false;
        }
        auto cls = classify_chain(z);
        if (semi) {
            if (cls.kind == ChainKind::Neither) return false;
        } else {
            if (cls.kind != ChainKind::Standard) return false;
        }
        if (seg.is_outer) {
            bool has_zero = false, has_extremal_zero = false;
            for (VertexId v : seg.vertices) {
                if (g.vertex(v).weight == 0) {
                    has_zero = true;
                    if (g.degree(v) <= 1) has_extremal_zero = true;
                }
            }
            if (has_zero && !has_extremal_zero) return false;
        }
    }
    if (!semi) {
        // the neighbor of every extremal 0-vertex must itself be a 0-vertex
        for (const auto& v : g.vertices()) {
            if (v.weight != 0 || g.degree(v.id) != 1) continue;
            for (VertexId n : g.neighbors(v.id))
                if (g.vertex(n).weight != 0) return false;
        }
    }
    return true;
}

namespace {

// index-based adjacency lists, built in one pass over the edge list
std::vector<std::vector<std::uint32_t>> adjacency(const WeightedGraph& g) {
    const auto& verts = g.vertices();
    std::vector<std::vector<std::uint32_t>> nbr(verts.size());
    auto index = [&](VertexId v) {
        auto it = std::lower_bound(verts.begin(), verts.end(), v,
                                   [](const VertexLabel& a, VertexId b) { return a.id < b; });
        return static_cast<std::uint32_t>(it - verts.begin());
    };
    for (const auto& [u, v] : g.edges()) {
        std::uint32_t iu = index(u), iv = index(v);
        nbr[iu].push_back(iv);
        nbr[iv].push_back(iu);
    }
    return nbr;
}

std::string ahu_code(const std::vector<VertexLabel>& verts,
                     const std::vector<std::vector<std::uint32_t>>& nbr, std::uint32_t v,
                     std::uint32_t parent) {
    char head[48];
    int len = std::snprintf(head, sizeof head, "(%d,%d,%d;", verts[v].weight, verts[v].genus,
                            static_cast<int>(verts[v].role));
    std::string s(head, static_cast<std::size_t>(len));
    std::vector<std::string> kids;
    for (std::uint32_t n : nbr[v])
        if (n != parent) kids.push_back(ahu_code(verts, nbr, n, v));
    std::sort(kids.begin(), kids.end());
    for (auto& k : kids) s += k;
    s += ")";
    return s;
}

std::vector<std::uint32_t> centroids(const std::vector<std::vector<std::uint32_t>>& nbr) {
    // classic subtree-size argument; at most two centroids
    std::uint32_t n = static_cast<std::uint32_t>(nbr.size());
    std::vector<std::uint32_t> parent(n, 0), order, size(n, 1);
    order.reserve(n);
    std::vector<std::uint32_t> stack{0};
    parent[0] = 0;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (std::uint32_t c : nbr[v])
            if (c != parent[v]) {
                parent[c] = v;
                stack.push_back(c);
            }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (*it != 0) size[parent[*it]] += size[*it];
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t heaviest = v == 0 ? 0 : n - size[v];
        for (std::uint32_t c : nbr[v])
            if (v == 0 || c != parent[v]) heaviest = std::max(heaviest, size[c]);
        if (heaviest <= n / 2) out.push_back(v);
    }
    return out;
}

} // namespace

CanonicalCode canonical_code(const WeightedGraph& g) {
    if (g.has_loop_or_multiedge())
        fail(ErrorCode::LoopsUnsupported, "canonical_code requires a simple tree");
    g.require_tree("canonical_code");
    if (g.vertex_count() == 0) return {""};
    auto nbr = adjacency(g);
    std::string best;
    for (std::uint32_t c : centroids(nbr)) {
        std::string code = ahu_code(g.vertices(), nbr, c, c);
        if (best.empty() || code < best) best = std::move(code);
    }
    return {best};
}

WeightedGraph make_chain(const std::vector<int>& weights, Role role) {
    WeightedGraph g;
    VertexId prev = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        VertexId v = g.add_vertex(weights[i], role);
        if (i > 0) g.add_edge(prev, v);
        prev = v;
    }
    return g;
}

std::optional<std::vector<VertexId>> chain_order(const WeightedGraph& g) {
    if (!g.is_tree() || g.vertex_count() == 0) return std::nullopt;
    std::vector<VertexId> ends;
    for (const auto& v : g.vertices()) {
        if (g.degree(v.id) > 2) return std::nullopt;
        if (g.degree(v.id) <= 1) ends.push_back(v.id);
    }
    VertexId start = *std::min_element(ends.begin(), ends.end());
    std::vector<VertexId> path{start};
    std::set<VertexId> used{start};
    while (path.size() < g.vertex_count()) {
        bool advanced = false;
        for (VertexId n : g.neighbors(path.back())) {
            if (!used.count(n)) {
                path.push_back(n);
                used.insert(n);
                advanced = true;
                break;
            }
        }
        if (!advanced) return std::nullopt;
    }
    return path;
}

std::optional<Zigzag> as_zigzag(const WeightedGraph& g) {
    auto order = chain_order(g);
    if (!order) return std::nullopt;
    Zigzag z;
    for (VertexId v : *order) z.weights.push_back(g.vertex(v).weight);
    return z;
}

} // namespace dg
