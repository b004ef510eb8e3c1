#include "dg/surgery.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <deque>
#include <string_view>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dg {
namespace surgery {

std::string step_to_line(const SurgeryStep& step) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, InnerBlowup>) {
                os << "inner_blowup edge=" << s.u << "-" << s.v << " creates=" << s.created
                   << " deltas=" << s.u << ":-1," << s.v << ":-1";
            } else if constexpr (std::is_same_v<T, OuterBlowup>) {
                os << "outer_blowup at=" << s.at << " creates=" << s.created << " deltas=" << s.at
                   << ":-1";
            } else if constexpr (std::is_same_v<T, Blowdown>) {
                os << "blowdown v=" << s.v << " deltas=";
                for (std::size_t i = 0; i < s.neighbors.size(); ++i)
                    os << (i ? "," : "") << s.neighbors[i] << ":+1";
            } else if constexpr (std::is_same_v<T, ElemInner>) {
                os << "elem_inner zero=" << s.zero_vertex << " toward=" << s.toward
                   << " creates=" << s.created;
            } else {
                os << "elem_outer zero=" << s.zero_vertex << " creates=" << s.created;
            }
        },
        step);
    return os.str();
}

std::string SurgeryTranscript::to_log() const {
    std::string out;
    for (const auto& s : steps) {
        out += step_to_line(s);
        out += '\n';
    }
    return out;
}

std::pair<WeightedGraph, SurgeryStep> blow_up(const WeightedGraph& g, const BlowupSite& site,
                                              Role new_role) {
    g.require_tree("blow_up");
    WeightedGraph out = g;
    if (const auto* e = std::get_if<EdgeSite>(&site)) {
        if (!out.has_edge(e->u, e->v))
            fail(ErrorCode::SiteMissing, "no edge " + std::to_string(e->u) + "-" +
                                             std::to_string(e->v));
        VertexId created = out.add_vertex(-1, new_role);
        out.set_weight(e->u, out.vertex(e->u).weight - 1);
        out.set_weight(e->v, out.vertex(e->v).weight - 1);
        out.remove_edge(e->u, e->v);
        out.add_edge(e->u, created);
        out.add_edge(created, e->v);
        return {std::move(out), InnerBlowup{e->u, e->v, created}};
    }
    const auto& v = std::get<VertexSite>(site);
    if (!out.has_vertex(v.v)) fail(ErrorCode::SiteMissing, "no vertex " + std::to_string(v.v));
    VertexId created = out.add_vertex(-1, new_role);
    out.set_weight(v.v, out.vertex(v.v).weight - 1);
    out.add_edge(v.v, created);
    return {std::move(out), OuterBlowup{v.v, created}};
}

std::pair<WeightedGraph, SurgeryStep> blow_down(const WeightedGraph& g, VertexId v) {
    g.require_tree("blow_down");
    if (g.vertex(v).weight != -1)
        fail(ErrorCode::NotMinusOne, "vertex " + std::to_string(v) + " has weight " +
                                         std::to_string(g.vertex(v).weight));
    auto nbrs = g.neighbors(v);
    if (nbrs.size() > 2)
        fail(ErrorCode::DegreeTooHigh, "vertex " + std::to_string(v) + " has degree " +
                                           std::to_string(nbrs.size()));
    WeightedGraph out = g;
    out.remove_vertex(v);
    for (VertexId n : nbrs) out.set_weight(n, out.vertex(n).weight + 1);
    if (nbrs.size() == 2) out.add_edge(nbrs[0], nbrs[1]);
    return {std::move(out), Blowdown{v, nbrs}};
}

std::pair<WeightedGraph, SurgeryStep> elementary_transform(const WeightedGraph& g,
                                                           VertexId zero_vertex,
                                                           const ElemDirection& direction) {
    g.require_tree("elementary_transform");
    const auto& zv = g.vertex(zero_vertex);
    if (zv.weight != 0)
        fail(ErrorCode::NotZeroVertex, "vertex " + std::to_string(zero_vertex) + " has weight " +
                                           std::to_string(zv.weight));
    Role role = zv.role;
    int genus = zv.genus;
    if (const auto* e = std::get_if<EdgeSite>(&direction)) {
        if (g.degree(zero_vertex) != 2)
            fail(ErrorCode::WrongDegree, "inner elementary transformation needs degree 2");
        VertexId other = e->u == zero_vertex ? e->v : e->u;
        if ((e->u != zero_vertex && e->v != zero_vertex) || !g.has_edge(zero_vertex, other))
            fail(ErrorCode::SiteMissing, "direction edge not incident to the 0-vertex");
        auto [g1, s1] = blow_up(g, EdgeSite{zero_vertex, other}, role);
        VertexId created = std::get<InnerBlowup>(s1).created;
        g1.vertex_mut(created).genus = 0;
        auto [g2, s2] = blow_down(g1, zero_vertex);
        g2.vertex_mut(created).genus = genus;
        return {std::move(g2), ElemInner{zero_vertex, other, created}};
    }
    if (g.degree(zero_vertex) > 1)
        fail(ErrorCode::WrongDegree, "outer elementary transformation needs degree <= 1");
    auto [g1, s1] = blow_up(g, VertexSite{zero_vertex}, role);
    VertexId created = std::get<OuterBlowup>(s1).created;
    g1.vertex_mut(created).genus = 0;
    auto [g2, s2] = blow_down(g1, zero_vertex);
    g2.vertex_mut(created).genus = genus;
    return {std::move(g2), ElemOuter{zero_vertex, created}};
}

WeightedGraph apply_step(const WeightedGraph& g, const SurgeryStep& step) {
    return std::visit(
        [&](const auto& s) -> WeightedGraph {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, InnerBlowup>) {
                return blow_up(g, EdgeSite{s.u, s.v}).first;
            } else if constexpr (std::is_same_v<T, OuterBlowup>) {
                return blow_up(g, VertexSite{s.at}).first;
            } else if constexpr (std::is_same_v<T, Blowdown>) {
                return blow_down(g, s.v).first;
            } else if constexpr (std::is_same_v<T, ElemInner>) {
                return elementary_transform(g, s.zero_vertex, EdgeSite{s.zero_vertex, s.toward})
                    .first;
            } else {
                return elementary_transform(g, s.zero_vertex, Outer{}).first;
            }
        },
        step);
}

std::pair<Zigzag, SurgeryTranscript> reverse(const Zigzag& z) {
    std::vector<int> w = z.weights;
    auto all_zero = std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
    if (all_zero) {
        if (w.size() > 3) fail(ErrorCode::NotReversible, "all-zero chain longer than 3");
        WeightedGraph g = make_chain(w);
        return {z, SurgeryTranscript{g, {}, g}};
    }
    auto reversible = [](const std::vector<int>& v) {
        if (v.size() < 3 || v[0] != 0 || v[1] != 0) return false;
        return std::all_of(v.begin() + 2, v.end(), [](int x) { return x <= -2; });
    };
    if (!reversible(w)) {
        std::vector<int> rev(w.rbegin(), w.rend());
        if (!reversible(rev)) fail(ErrorCode::NotReversible, "no leading zero pair shape");
        w = std::move(rev);
    }
    std::size_t n = w.size() - 1; // positions 0..n

    WeightedGraph g = make_chain(w);
    SurgeryTranscript t;
    t.initial = g;
    auto order = *chain_order(g);
    // move the zero pair from (p, p+1) to (p+1, p+2), across the weight at p+2
    for (std::size_t p = 0; p + 2 <= n; ++p) {
        int times = -g.vertex(order[p + 2]).weight;
        for (int i = 0; i < times; ++i) {
            auto [g2, step] = elementary_transform(g, order[p + 1],
                                                   EdgeSite{order[p + 1], order[p]});
            order[p + 1] = std::get<ElemInner>(step).created;
            g = std::move(g2);
            t.steps.push_back(step);
        }
    }
    t.final = g;
    Zigzag out;
    out.weights = {0, 0};
    out.weights.insert(out.weights.end(), w.rbegin(), w.rend() - 2); // [[0,0,w_n,...,w_2]]
    return {out, std::move(t)};
}

namespace {

struct SearchState {
    WeightedGraph graph;
    int blowups_used = 0;
    std::ptrdiff_t parent = -1;
    std::optional<SurgeryStep> step;
};

struct MoveLimits {
    int weight_floor;
    int weight_ceil;
    std::size_t size_cap;
    int blowup_depth;
};

bool within_window(const WeightedGraph& g, const MoveLimits& lim) {
    for (const auto& v : g.vertices())
        if (v.weight < lim.weight_floor || v.weight > lim.weight_ceil) return false;
    return true;
}

std::vector<std::pair<WeightedGraph, SurgeryStep>> expand(const SearchState& st,
                                                          const MoveLimits& lim,
                                                          int* blowup_delta_out) {
    std::vector<std::pair<WeightedGraph, SurgeryStep>> out;
    const auto& g = st.graph;
    for (const auto& v : g.vertices()) {
        if (v.weight == -1 && g.degree(v.id) <= 2) out.push_back(blow_down(g, v.id));
        if (v.weight == 0) {
            auto nbrs = g.neighbors(v.id);
            if (nbrs.size() == 2) {
                for (VertexId n : nbrs)
                    out.push_back(elementary_transform(g, v.id, EdgeSite{v.id, n}));
            } else if (nbrs.size() <= 1) {
                out.push_back(elementary_transform(g, v.id, Outer{}));
            }
        }
    }
    std::size_t non_blowup = out.size();
    if (st.blowups_used < lim.blowup_depth && g.vertex_count() < lim.size_cap) {
        for (const auto& [u, v] : g.edges())
            out.push_back(blow_up(g, EdgeSite{u, v}, Role::Boundary));
        for (const auto& v : g.vertices())
            out.push_back(blow_up(g, VertexSite{v.id}, Role::Boundary));
    }
    std::erase_if(out, [&](const auto& p) { return !within_window(p.first, lim); });
    if (blowup_delta_out) *blowup_delta_out = static_cast<int>(non_blowup);
    return out;
}

bool is_blowup_step(const SurgeryStep& s) {
    return std::holds_alternative<InnerBlowup>(s) || std::holds_alternative<OuterBlowup>(s);
}

MoveLimits limits_for(const WeightedGraph& g, int blowup_depth, std::size_t size_cap,
                      int slack) {
    int wmin = 0, wmax = 0;
    for (const auto& v : g.vertices()) {
        wmin = std::min(wmin, v.weight);
        wmax = std::max(wmax, v.weight);
    }
    // elementary transformations drift weights without bound, so the weight
    // window is what makes the closure finite; slack is how far outside the
    // input range intermediate states may wander
    return MoveLimits{wmin - slack, wmax + slack, size_cap, blowup_depth};
}

// Compact fixed-size states for the oracle's closure search: small trees as
// weight/role arrays plus adjacency bitmasks, with surgery moves applied in
// place. Canonical codes match canonical_code() byte for byte so results can
// be compared against graphs canonicalized through the generic path.
constexpr std::uint32_t kCompactMax = 16;

struct CompactState {
    std::uint8_t n = 0;
    std::array<std::int8_t, kCompactMax> w{};
    std::array<std::int8_t, kCompactMax> genus{};
    std::array<std::uint8_t, kCompactMax> role{};
    std::array<std::uint16_t, kCompactMax> adj{};
};

std::optional<CompactState> compact_of(const WeightedGraph& g) {
    const auto& verts = g.vertices();
    if (verts.size() > kCompactMax) return std::nullopt;
    CompactState s;
    s.n = static_cast<std::uint8_t>(verts.size());
    for (std::uint32_t i = 0; i < s.n; ++i) {
        if (verts[i].weight < -100 || verts[i].weight > 100) return std::nullopt;
        if (verts[i].genus < 0 || verts[i].genus > 100) return std::nullopt;
        s.w[i] = static_cast<std::int8_t>(verts[i].weight);
        s.genus[i] = static_cast<std::int8_t>(verts[i].genus);
        s.role[i] = static_cast<std::uint8_t>(verts[i].role);
    }
    auto index = [&](VertexId v) {
        auto it = std::lower_bound(verts.begin(), verts.end(), v,
                                   [](const VertexLabel& a, VertexId b) { return a.id < b; });
        return static_cast<std::uint32_t>(it - verts.begin());
    };
    for (const auto& [u, v] : g.edges()) {
        std::uint32_t iu = index(u), iv = index(v);
        s.adj[iu] |= static_cast<std::uint16_t>(1u << iv);
        s.adj[iv] |= static_cast<std::uint16_t>(1u << iu);
    }
    return s;
}

WeightedGraph graph_of(const CompactState& s) {
    WeightedGraph g;
    for (std::uint32_t i = 0; i < s.n; ++i)
        g.add_vertex(s.w[i], static_cast<Role>(s.role[i]), s.genus[i]);
    for (std::uint32_t i = 0; i < s.n; ++i)
        for (std::uint16_t m = s.adj[i] >> (i + 1); m;) {
            std::uint32_t j = i + 1 + static_cast<std::uint32_t>(std::countr_zero(m));
            g.add_edge(i, j);
            m = static_cast<std::uint16_t>(m & (m - 1));
        }
    return g;
}

constexpr std::uint32_t kKeyMax = 5 * kCompactMax;

// cheap binary spelling: '(', 3 label bytes, sorted child codes, ')'
std::uint32_t compact_ahu(const CompactState& s, std::uint32_t v, std::uint32_t parent,
                          char* out) {
    out[0] = '(';
    out[1] = static_cast<char>(s.w[v] + 100);
    out[2] = static_cast<char>(s.genus[v]);
    out[3] = static_cast<char>(s.role[v]);
    struct Kid {
        char buf[kKeyMax];
        std::uint32_t len;
    };
    Kid kids[kCompactMax];
    std::uint32_t k = 0;
    for (std::uint16_t m = s.adj[v]; m;) {
        std::uint32_t u = static_cast<std::uint32_t>(std::countr_zero(m));
        m = static_cast<std::uint16_t>(m & (m - 1));
        if (u != parent) {
            kids[k].len = compact_ahu(s, u, v, kids[k].buf);
            ++k;
        }
    }
    std::sort(kids, kids + k, [](const Kid& a, const Kid& b) {
        int c = std::memcmp(a.buf, b.buf, std::min(a.len, b.len));
        return c != 0 ? c < 0 : a.len < b.len;
    });
    std::uint32_t pos = 4;
    for (std::uint32_t i = 0; i < k; ++i) {
        std::memcpy(out + pos, kids[i].buf, kids[i].len);
        pos += kids[i].len;
    }
    out[pos++] = ')';
    return pos;
}

// dedup key only: canonical for the state, but not the public code format
std::string compact_code(const CompactState& s) {
    if (s.n == 0) return "";
    // chain fast path: spell the path from both ends, keep the smaller; the
    // 'C' prefix keeps chain keys disjoint from the AHU keys of branched
    // states
    bool chain = true;
    std::uint32_t ends[2] = {0, 0};
    std::uint32_t ne = 0;
    for (std::uint32_t v = 0; v < s.n && chain; ++v) {
        int d = std::popcount(s.adj[v]);
        if (d > 2)
            chain = false;
        else if (d <= 1 && ne < 2)
            ends[ne++] = v;
    }
    if (chain) {
        auto walk = [&](std::uint32_t start, char* out) {
            std::uint32_t prev = kCompactMax, x = start, pos = 0;
            for (;;) {
                out[pos++] = static_cast<char>(s.w[x] + 100);
                out[pos++] = static_cast<char>(s.genus[x]);
                out[pos++] = static_cast<char>(s.role[x]);
                std::uint16_t m = static_cast<std::uint16_t>(
                    s.adj[x] & ~(prev == kCompactMax ? 0u : 1u << prev));
                if (!m) break;
                prev = x;
                x = static_cast<std::uint32_t>(std::countr_zero(m));
            }
            return pos;
        };
        char fwd[3 * kCompactMax + 1], bwd[3 * kCompactMax + 1];
        fwd[0] = bwd[0] = 'C';
        std::uint32_t len = walk(ends[0], fwd + 1);
        const char* pick = fwd;
        if (s.n > 1) {
            walk(ends[1], bwd + 1);
            if (std::memcmp(bwd + 1, fwd + 1, len) < 0) pick = bwd;
        }
        return std::string(pick, len + 1);
    }
    // subtree sizes from an iterative DFS rooted at 0, then the centroid rule
    std::array<std::uint8_t, kCompactMax> parent{}, size{};
    std::array<std::uint8_t, kCompactMax> order{};
    std::uint32_t no = 0;
    std::array<std::uint8_t, kCompactMax> stack{};
    std::uint32_t sp = 0;
    stack[sp++] = 0;
    parent[0] = 0;
    while (sp) {
        std::uint32_t v = stack[--sp];
        order[no++] = static_cast<std::uint8_t>(v);
        for (std::uint16_t m = s.adj[v]; m;) {
            std::uint32_t c = static_cast<std::uint32_t>(std::countr_zero(m));
            m = static_cast<std::uint16_t>(m & (m - 1));
            if (c == parent[v]) continue; // root is its own parent, never a neighbor
            parent[c] = static_cast<std::uint8_t>(v);
            stack[sp++] = static_cast<std::uint8_t>(c);
        }
    }
    for (std::uint32_t i = 0; i < s.n; ++i) size[i] = 1;
    for (std::uint32_t i = no; i-- > 1;) size[parent[order[i]]] += size[order[i]];
    std::string best;
    for (std::uint32_t v = 0; v < s.n; ++v) {
        std::uint32_t heaviest = v == 0 ? 0 : s.n - size[v];
        for (std::uint16_t m = s.adj[v]; m;) {
            std::uint32_t c = static_cast<std::uint32_t>(std::countr_zero(m));
            m = static_cast<std::uint16_t>(m & (m - 1));
            if (v == 0 || c != parent[v]) heaviest = std::max<std::uint32_t>(heaviest, size[c]);
        }
        if (heaviest > s.n / 2) continue;
        char buf[kKeyMax];
        std::uint32_t len = compact_ahu(s, v, v, buf);
        std::string_view code(buf, len);
        if (best.empty() || code < best) best.assign(code);
    }
    return best;
}

CompactState compact_drop(const CompactState& s, std::uint32_t v) {
    CompactState out;
    out.n = static_cast<std::uint8_t>(s.n - 1);
    for (std::uint32_t i = 0, j = 0; i < s.n; ++i) {
        if (i == v) continue;
        out.w[j] = s.w[i];
        out.genus[j] = s.genus[i];
        out.role[j] = s.role[i];
        std::uint16_t m = s.adj[i];
        std::uint16_t low = static_cast<std::uint16_t>(m & ((1u << v) - 1));
        std::uint16_t high = static_cast<std::uint16_t>((m >> (v + 1)) << v);
        out.adj[j] = static_cast<std::uint16_t>(low | high);
        ++j;
    }
    return out;
}

// mirror of is_standard_graph on the compact representation: split at
// branch/genus vertices, classify each path segment, apply the outer-zero
// and zero-leaf rules
bool compact_is_standard(const CompactState& s) {
    std::uint32_t removed = 0;
    for (std::uint32_t v = 0; v < s.n; ++v)
        if (std::popcount(s.adj[v]) >= 3 || s.genus[v] > 0)
            removed |= 1u << v;
    std::uint32_t visited = removed;
    for (std::uint32_t v = 0; v < s.n; ++v) {
        if (visited & (1u << v)) continue;
        // flood the component of the graph minus removed vertices
        std::uint32_t comp = 0, stack = 1u << v;
        while (stack) {
            std::uint32_t x = static_cast<std::uint32_t>(std::countr_zero(stack));
            stack &= stack - 1;
            if (comp & (1u << x)) continue;
            comp |= 1u << x;
            stack |= s.adj[x] & ~removed & ~comp;
        }
        visited |= comp;
        // walk the path from an endpoint of the induced subgraph
        std::uint32_t start = v;
        for (std::uint32_t x = 0; x < s.n; ++x)
            if ((comp & (1u << x)) && std::popcount(s.adj[x] & comp) <= 1) {
                start = x;
                break;
            }
        Zigzag z;
        bool is_outer = false;
        std::uint32_t prev = kCompactMax, x = start;
        for (;;) {
            z.weights.push_back(s.w[x]);
            if (std::popcount(s.adj[x]) <= 1) is_outer = true;
            std::uint32_t nexts =
                s.adj[x] & comp & ~(prev == kCompactMax ? 0u : 1u << prev);
            prev = x;
            if (!nexts) break;
            x = static_cast<std::uint32_t>(std::countr_zero(nexts));
        }
        if (z.weights.size() != static_cast<std::size_t>(std::popcount(comp)))
            return false; // not a path (cannot happen for trees)
        if (classify_chain(z).kind != ChainKind::Standard) return false;
        if (is_outer) {
            bool has_zero = false, has_extremal_zero = false;
            for (std::uint32_t y = 0; y < s.n; ++y) {
                if (!(comp & (1u << y)) || s.w[y] != 0) continue;
                has_zero = true;
                if (std::popcount(s.adj[y]) <= 1) has_extremal_zero = true;
            }
            if (has_zero && !has_extremal_zero) return false;
        }
    }
    // the neighbor of every extremal 0-vertex must itself be a 0-vertex
    for (std::uint32_t v = 0; v < s.n; ++v) {
        if (s.w[v] != 0 || std::popcount(s.adj[v]) != 1) continue;
        std::uint32_t nb = static_cast<std::uint32_t>(std::countr_zero(s.adj[v]));
        if (s.w[nb] != 0) return false;
    }
    return true;
}

// a surgery move in slot coordinates, for replay on the original graph
struct CompactMove {
    enum Kind : std::uint8_t { BlowdownAt, ElemToward, ElemTip, BlowupEdge, BlowupVertex };
    Kind kind = BlowdownAt;
    std::uint8_t a = 0, b = 0;
};

// emit(child, is_blowup, move) for every legal move inside the weight window
template <class F>
void compact_children(const CompactState& s, const MoveLimits& lim, bool allow_blowup,
                      F&& emit) {
    for (std::uint32_t v = 0; v < s.n; ++v) {
        std::uint32_t deg = static_cast<std::uint32_t>(std::popcount(s.adj[v]));
        if (s.w[v] == -1 && deg <= 2) {
            std::uint16_t m = s.adj[v];
            std::uint32_t a = kCompactMax, b = kCompactMax;
            if (m) {
                a = static_cast<std::uint32_t>(std::countr_zero(m));
                m = static_cast<std::uint16_t>(m & (m - 1));
                if (m) b = static_cast<std::uint32_t>(std::countr_zero(m));
            }
            if ((a == kCompactMax || s.w[a] + 1 <= lim.weight_ceil) &&
                (b == kCompactMax || s.w[b] + 1 <= lim.weight_ceil)) {
                CompactState c = s;
                if (a != kCompactMax) ++c.w[a];
                if (b != kCompactMax) {
                    ++c.w[b];
                    c.adj[a] |= static_cast<std::uint16_t>(1u << b);
                    c.adj[b] |= static_cast<std::uint16_t>(1u << a);
                }
                emit(compact_drop(c, v), false,
                     CompactMove{CompactMove::BlowdownAt, static_cast<std::uint8_t>(v), 0});
            }
        }
        if (s.w[v] == 0 && deg >= 1 && deg <= 2) {
            std::uint16_t m = s.adj[v];
            std::uint32_t a = static_cast<std::uint32_t>(std::countr_zero(m));
            m = static_cast<std::uint16_t>(m & (m - 1));
            std::uint32_t b = m ? static_cast<std::uint32_t>(std::countr_zero(m)) : kCompactMax;
            if (deg == 2) {
                // inner elementary transformation toward either neighbor
                if (s.w[a] - 1 >= lim.weight_floor && s.w[b] + 1 <= lim.weight_ceil) {
                    CompactState c = s;
                    --c.w[a];
                    ++c.w[b];
                    emit(std::move(c), false,
                         CompactMove{CompactMove::ElemToward, static_cast<std::uint8_t>(v),
                                     static_cast<std::uint8_t>(a)});
                }
                if (s.w[b] - 1 >= lim.weight_floor && s.w[a] + 1 <= lim.weight_ceil) {
                    CompactState c = s;
                    --c.w[b];
                    ++c.w[a];
                    emit(std::move(c), false,
                         CompactMove{CompactMove::ElemToward, static_cast<std::uint8_t>(v),
                                     static_cast<std::uint8_t>(b)});
                }
            } else if (s.w[a] + 1 <= lim.weight_ceil) {
                // outer elementary transformation at a chain tip
                CompactState c = s;
                ++c.w[a];
                emit(std::move(c), false,
                     CompactMove{CompactMove::ElemTip, static_cast<std::uint8_t>(v), 0});
            }
        }
    }
    if (allow_blowup && s.n < lim.size_cap && s.n < kCompactMax) {
        for (std::uint32_t u = 0; u < s.n; ++u) {
            if (s.w[u] - 1 < lim.weight_floor) continue;
            // outer blowup at u
            {
                CompactState c = s;
                --c.w[u];
                c.w[c.n] = -1;
                c.genus[c.n] = 0;
                c.role[c.n] = static_cast<std::uint8_t>(Role::Boundary);
                c.adj[c.n] = static_cast<std::uint16_t>(1u << u);
                c.adj[u] |= static_cast<std::uint16_t>(1u << c.n);
                ++c.n;
                emit(std::move(c), true,
                     CompactMove{CompactMove::BlowupVertex, static_cast<std::uint8_t>(u), 0});
            }
            // inner blowups on edges u < v
            for (std::uint16_t m = s.adj[u] >> (u + 1); m;) {
                std::uint32_t v = u + 1 + static_cast<std::uint32_t>(std::countr_zero(m));
                m = static_cast<std::uint16_t>(m & (m - 1));
                if (s.w[v] - 1 < lim.weight_floor) continue;
                CompactState c = s;
                --c.w[u];
                --c.w[v];
                c.adj[u] = static_cast<std::uint16_t>(c.adj[u] & ~(1u << v));
                c.adj[v] = static_cast<std::uint16_t>(c.adj[v] & ~(1u << u));
                c.w[c.n] = -1;
                c.genus[c.n] = 0;
                c.role[c.n] = static_cast<std::uint8_t>(Role::Boundary);
                c.adj[c.n] = static_cast<std::uint16_t>((1u << u) | (1u << v));
                c.adj[u] |= static_cast<std::uint16_t>(1u << c.n);
                c.adj[v] |= static_cast<std::uint16_t>(1u << c.n);
                ++c.n;
                emit(std::move(c), true,
                     CompactMove{CompactMove::BlowupEdge, static_cast<std::uint8_t>(u),
                                 static_cast<std::uint8_t>(v)});
            }
        }
    }
}

// replay slot-coordinate moves through the real surgery ops, extending the
// transcript and returning the resulting graph
WeightedGraph replay_moves(const WeightedGraph& start, const std::vector<CompactMove>& moves,
                           SurgeryTranscript& t) {
    WeightedGraph cur = start;
    std::vector<VertexId> ids;
    for (const auto& v : cur.vertices()) ids.push_back(v.id);
    for (const auto& m : moves) {
        switch (m.kind) {
        case CompactMove::BlowdownAt: {
            auto [ng, step] = blow_down(cur, ids[m.a]);
            cur = std::move(ng);
            t.steps.push_back(step);
            ids.erase(ids.begin() + m.a);
            break;
        }
        case CompactMove::ElemToward: {
            auto [ng, step] =
                elementary_transform(cur, ids[m.a], EdgeSite{ids[m.a], ids[m.b]});
            cur = std::move(ng);
            t.steps.push_back(step);
            ids[m.a] = std::get<ElemInner>(t.steps.back()).created;
            break;
        }
        case CompactMove::ElemTip: {
            auto [ng, step] = elementary_transform(cur, ids[m.a], Outer{});
            cur = std::move(ng);
            t.steps.push_back(step);
            ids[m.a] = std::get<ElemOuter>(t.steps.back()).created;
            break;
        }
        case CompactMove::BlowupEdge: {
            auto [ng, step] = blow_up(cur, EdgeSite{ids[m.a], ids[m.b]}, Role::Boundary);
            cur = std::move(ng);
            t.steps.push_back(step);
            ids.push_back(std::get<InnerBlowup>(t.steps.back()).created);
            break;
        }
        case CompactMove::BlowupVertex: {
            auto [ng, step] = blow_up(cur, VertexSite{ids[m.a]}, Role::Boundary);
            cur = std::move(ng);
            t.steps.push_back(step);
            ids.push_back(std::get<OuterBlowup>(t.steps.back()).created);
            break;
        }
        }
    }
    return cur;
}

std::set<CanonicalCode> compact_oracle(const CompactState& start, const MoveLimits& lim,
                                       bool parallel, std::size_t node_cap) {
    std::set<CanonicalCode> found;
    std::unordered_set<std::string> seen, next_seen;
    std::size_t explored = 0;
    std::vector<std::pair<std::string, CompactState>> bucket, next_bucket;
    bucket.emplace_back(compact_code(start), start);
    if (compact_is_standard(start)) found.insert(canonical_code(graph_of(start)));

    for (int used = 0; used <= lim.blowup_depth; ++used) {
        // commit this bucket's codes only now: a code first produced by a
        // blowup may still be reached more cheaply within the prior bucket
        std::vector<CompactState> frontier;
        for (auto& [code, st] : bucket)
            if (seen.insert(code).second) frontier.push_back(st);
        bucket.clear();
        bool allow_blowup = used < lim.blowup_depth;
        auto take = [&](std::string&& code, const CompactState& st, bool grew) {
            if (grew) {
                if (seen.count(code) || !next_seen.insert(code).second) return false;
            } else if (!seen.insert(code).second) {
                return false;
            }
            if (compact_is_standard(st)) found.insert(canonical_code(graph_of(st)));
            if (grew) next_bucket.emplace_back(std::move(code), st);
            return !grew;
        };
#ifdef _OPENMP
        if (parallel && omp_get_max_threads() > 1) {
            // level-synchronous so child generation can fan out across threads
            while (!frontier.empty()) {
                explored += frontier.size();
                if (explored > node_cap)
                    fail(ErrorCode::SearchBudgetExceeded,
                         "oracle exceeded " + std::to_string(node_cap) + " nodes");
                std::vector<std::pair<std::string, CompactState>> same, up;
                same.reserve(frontier.size() * 4);
#pragma omp parallel
                {
                    std::vector<std::pair<std::string, CompactState>> ls, lu;
#pragma omp for schedule(dynamic, 16) nowait
                    for (std::ptrdiff_t i = 0;
                         i < static_cast<std::ptrdiff_t>(frontier.size()); ++i)
                        compact_children(frontier[i], lim, allow_blowup,
                                         [&](CompactState child, bool grew, CompactMove) {
                                             std::string code = compact_code(child);
                                             (grew ? lu : ls)
                                                 .emplace_back(std::move(code), child);
                                         });
#pragma omp critical
                    {
                        for (auto& p : ls) same.push_back(std::move(p));
                        for (auto& p : lu) up.push_back(std::move(p));
                    }
                }
                std::vector<CompactState> next;
                for (auto& [code, st] : same)
                    if (take(std::move(code), st, false)) next.push_back(st);
                for (auto& [code, st] : up) take(std::move(code), st, true);
                frontier = std::move(next);
            }
        } else
#endif
        {
            (void)parallel;
            for (std::size_t i = 0; i < frontier.size(); ++i) {
                if (++explored > node_cap)
                    fail(ErrorCode::SearchBudgetExceeded,
                         "oracle exceeded " + std::to_string(node_cap) + " nodes");
                // copy: growing the frontier may invalidate references
                CompactState st = frontier[i];
                compact_children(st, lim, allow_blowup,
                                 [&](CompactState child, bool grew, CompactMove) {
                                     if (take(compact_code(child), child, grew))
                                         frontier.push_back(child);
                                 });
            }
        }
        bucket = std::move(next_bucket);
        next_bucket.clear();
        next_seen.clear();
    }
    return found;
}

} // namespace

StandardizeResult standardize(const WeightedGraph& g, const SearchBudget& budget) {
    g.require_tree("standardize");
    SurgeryTranscript t;
    t.initial = g;
    WeightedGraph cur = g;

    // phase 1: exhaust blowdowns of (-1)-vertices of degree <= 2, lowest id first
    for (;;) {
        if (is_standard_graph(cur, false)) {
            t.final = cur;
            return {cur, std::move(t)};
        }
        bool contracted = false;
        for (const auto& v : cur.vertices()) {
            if (v.weight == -1 && cur.degree(v.id) <= 2) {
                auto [next, step] = blow_down(cur, v.id);
                cur = std::move(next);
                t.steps.push_back(step);
                contracted = true;
                break;
            }
        }
        if (!contracted) break;
    }

    // phase 2: iterative deepening over the blowup depth
    if (budget.size_cap <= kCompactMax) {
        if (auto c0 = compact_of(cur)) {
            struct PNode {
                CompactState st;
                std::ptrdiff_t parent;
                CompactMove mv;
                int blowups;
            };
            // uniform-cost over blowups spent: the whole blowup-free closure
            // is explored before the first blowup layer, so easy inputs are
            // settled as cheaply as under iterative deepening
            MoveLimits lim =
                limits_for(cur, budget.max_blowup_depth, budget.size_cap, 2);
            std::vector<PNode> nodes{{*c0, -1, {}, 0}};
            std::unordered_set<std::string> seen{compact_code(*c0)}, deferred_seen;
            std::vector<std::size_t> frontier{0};
            std::vector<std::pair<std::string, std::size_t>> deferred;
            while (!frontier.empty()) {
                for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
                    std::size_t i = frontier[fi];
                    if (nodes.size() > budget.node_cap)
                        fail(ErrorCode::SearchBudgetExceeded,
                             "standardize exceeded " + std::to_string(budget.node_cap) +
                                 " nodes");
                    // copy: the emit callback grows `nodes`, invalidating refs
                    CompactState st = nodes[i].st;
                    int bu = nodes[i].blowups;
                    bool done = false;
                    compact_children(
                        st, lim, bu < lim.blowup_depth,
                        [&](CompactState child, bool grew, CompactMove mv) {
                            if (done) return;
                            std::string code = compact_code(child);
                            if (grew) {
                                // commit on layer switch only: the code may
                                // still be reached without this blowup
                                if (seen.count(code) || !deferred_seen.insert(code).second)
                                    return;
                            } else if (!seen.insert(code).second) {
                                return;
                            }
                            if (compact_is_standard(child)) done = true;
                            nodes.push_back({std::move(child),
                                             static_cast<std::ptrdiff_t>(i), mv,
                                             bu + (grew ? 1 : 0)});
                            if (grew)
                                deferred.emplace_back(std::move(code), nodes.size() - 1);
                            else
                                frontier.push_back(nodes.size() - 1);
                        });
                    if (done) {
                        std::vector<CompactMove> path;
                        for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(nodes.size()) - 1;
                             k > 0; k = nodes[k].parent)
                            path.push_back(nodes[k].mv);
                        std::reverse(path.begin(), path.end());
                        WeightedGraph out = replay_moves(cur, path, t);
                        t.final = out;
                        return {out, std::move(t)};
                    }
                }
                frontier.clear();
                for (auto& [code, idx] : deferred)
                    if (seen.insert(code).second) frontier.push_back(idx);
                deferred.clear();
                deferred_seen.clear();
            }
            fail(ErrorCode::SearchBudgetExceeded,
                 "no standard form within blowup depth " +
                     std::to_string(budget.max_blowup_depth));
        }
    }
    for (int depth = 0; depth <= budget.max_blowup_depth; ++depth) {
        MoveLimits lim = limits_for(cur, depth, budget.size_cap, depth + 2);
        std::vector<SearchState> states;
        std::unordered_set<std::string> seen;
        states.push_back({cur, 0, -1, std::nullopt});
        seen.insert(canonical_code(cur).bytes);
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (states.size() > budget.node_cap)
                fail(ErrorCode::SearchBudgetExceeded,
                     "standardize exceeded " + std::to_string(budget.node_cap) + " nodes");
            auto moves = expand(states[i], lim, nullptr);
            for (auto& [ng, step] : moves) {
                auto code = canonical_code(ng).bytes;
                if (!seen.insert(code).second) continue;
                int bu = states[i].blowups_used + (is_blowup_step(step) ? 1 : 0);
                bool done = is_standard_graph(ng, false);
                states.push_back({std::move(ng), bu, static_cast<std::ptrdiff_t>(i), step});
                if (done) {
                    // reconstruct the path
                    std::vector<SurgeryStep> path;
                    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(states.size()) - 1;
                         k > 0; k = states[k].parent)
                        path.push_back(*states[k].step);
                    std::reverse(path.begin(), path.end());
                    for (auto& s : path) t.steps.push_back(s);
                    t.final = states.back().graph;
                    return {states.back().graph, std::move(t)};
                }
            }
        }
    }
    fail(ErrorCode::SearchBudgetExceeded,
         "no standard form within blowup depth " + std::to_string(budget.max_blowup_depth));
}

std::set<CanonicalCode> confluence_oracle(const WeightedGraph& g, int blowup_depth,
                                          std::size_t size_cap, bool parallel,
                                          std::size_t node_cap) {
    g.require_tree("confluence_oracle");
    if (g.vertex_count() > size_cap)
        fail(ErrorCode::SearchBudgetExceeded, "input exceeds the size cap");
    MoveLimits lim = limits_for(g, blowup_depth, size_cap, 2);

    if (size_cap <= kCompactMax)
        if (auto c0 = compact_of(g))
            return compact_oracle(*c0, lim, parallel, node_cap);

    std::set<CanonicalCode> found;
    std::unordered_set<std::string> seen;
    std::size_t explored = 0;

    // blowups are the only budget-consuming move, so processing states in
    // buckets of blowups-used visits each code once, at its minimal cost;
    // the reachable set from a state only grows with remaining budget, so
    // later, costlier encounters of the same code can be dropped
    std::vector<std::pair<std::string, WeightedGraph>> bucket, next_bucket;
    std::unordered_set<std::string> next_seen;
    bucket.emplace_back(canonical_code(g).bytes, g);
    if (is_standard_graph(g, false)) found.insert(canonical_code(g));

    for (int used = 0; used <= blowup_depth; ++used) {
        // commit this bucket's codes only now: a code first produced by a
        // blowup may still be reached more cheaply within the prior bucket
        std::vector<WeightedGraph> frontier;
        for (auto& [code, bg] : bucket)
            if (seen.insert(code).second) frontier.push_back(std::move(bg));
        bucket.clear();
        while (!frontier.empty()) {
            explored += frontier.size();
            if (explored > node_cap)
                fail(ErrorCode::SearchBudgetExceeded,
                     "oracle exceeded " + std::to_string(node_cap) + " nodes");
            // expand one BFS level; the result-set union is order-independent
            std::vector<std::pair<std::string, WeightedGraph>> same, up;
            auto expand_one = [&](const WeightedGraph& cur, auto& same_out, auto& up_out) {
                SearchState st{cur, used, -1, {}};
                for (auto& [ng, step] : expand(st, lim, nullptr)) {
                    std::string code = canonical_code(ng).bytes;
                    if (is_blowup_step(step))
                        up_out.emplace_back(std::move(code), std::move(ng));
                    else
                        same_out.emplace_back(std::move(code), std::move(ng));
                }
            };
#ifdef _OPENMP
            if (parallel) {
#pragma omp parallel
                {
                    std::vector<std::pair<std::string, WeightedGraph>> ls, lu;
#pragma omp for schedule(dynamic) nowait
                    for (std::ptrdiff_t i = 0;
                         i < static_cast<std::ptrdiff_t>(frontier.size()); ++i)
                        expand_one(frontier[i], ls, lu);
#pragma omp critical
                    {
                        for (auto& p : ls) same.push_back(std::move(p));
                        for (auto& p : lu) up.push_back(std::move(p));
                    }
                }
            } else
#endif
            {
                (void)parallel;
                for (const auto& cur : frontier) expand_one(cur, same, up);
            }
            std::vector<WeightedGraph> next;
            for (auto& [code, ng] : same) {
                if (!seen.insert(code).second) continue;
                if (is_standard_graph(ng, false)) found.insert(CanonicalCode{code});
                next.push_back(std::move(ng));
            }
            for (auto& [code, ng] : up) {
                if (seen.count(code) || !next_seen.insert(code).second) continue;
                if (is_standard_graph(ng, false)) found.insert(CanonicalCode{code});
                next_bucket.emplace_back(std::move(code), std::move(ng));
            }
            frontier = std::move(next);
        }
        bucket = std::move(next_bucket);
        next_bucket.clear();
        next_seen.clear();
    }
    return found;
}

} // namespace surgery
} // namespace dg
