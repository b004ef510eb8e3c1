#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dg/extended.hpp"
#include "dg/models.hpp"

using namespace dg;
using namespace dg::extended;

namespace {

// Zigzag completion [[0,0,tail...]] as an extended graph whose single fiber is
// the whole tail; ids 0,1 are the full fiber and the section.
ExtendedGraph zigzag_completion(const std::vector<int>& tail) {
    ExtendedGraph e;
    e.graph.add_vertex(0, Role::FiberZero, 0, "C_0");
    e.graph.add_vertex(0, Role::Section, 0, "C_1");
    Fiber f;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        VertexId v = e.graph.add_vertex(tail[i], Role::Boundary, 0,
                                        "C_" + std::to_string(i + 2));
        e.graph.add_edge(v - 1, v);
        f.members.push_back(v);
    }
    e.graph.add_edge(0, 1);
    e.section = 1;
    e.full_fibers = {0};
    if (!tail.empty()) {
        f.distinguished = 2;
        e.fibers.push_back(std::move(f));
    }
    return e;
}

// The two completions of the jumping-feather example: boundary chain
// C_0(0)-C_1(0)-C_2(-2)-C_3(-2), with feathers F_1, F_2 either on separate
// components or stacked on C_3 after F_1 has jumped.
ExtendedGraph jump_separate() {
    ExtendedGraph e = zigzag_completion({-2, -2});
    VertexId f1 = e.graph.add_vertex(-1, Role::Feather, 0, "F_1");
    e.graph.add_edge(2, f1);
    VertexId f2 = e.graph.add_vertex(-1, Role::Feather, 0, "F_2");
    e.graph.add_edge(3, f2);
    e.fibers[0].members.push_back(f1);
    e.fibers[0].members.push_back(f2);
    return e;
}

ExtendedGraph jump_stacked() {
    ExtendedGraph e = zigzag_completion({-2, -2});
    VertexId f1 = e.graph.add_vertex(-2, Role::Feather, 0, "F_1");
    e.graph.add_edge(3, f1);
    VertexId f2 = e.graph.add_vertex(-1, Role::Feather, 0, "F_2");
    e.graph.add_edge(3, f2);
    e.fibers[0].members.push_back(f1);
    e.fibers[0].members.push_back(f2);
    return e;
}

std::vector<std::set<VertexId>> round_sets(const std::vector<ContractionRound>& rounds) {
    std::vector<std::set<VertexId>> out;
    for (const auto& r : rounds) {
        std::set<VertexId> s;
        for (const auto& e : r.contracted) s.insert(e.v);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

TEST_CASE("separate feathers contract simultaneously, then the chain") {
    ExtendedGraph e = jump_separate();
    FiberReport rep = validate(e);
    REQUIRE(rep.valid);
    REQUIRE(rep.fibers.size() == 1);
    auto rounds = round_sets(rep.fibers[0].rounds);
    REQUIRE(rounds.size() == 2);
    CHECK(rounds[0] == std::set<VertexId>{4, 5}); // F_1, F_2
    CHECK(rounds[1] == std::set<VertexId>{3});    // C_3
}

TEST_CASE("stacked feathers contract one at a time") {
    ExtendedGraph e = jump_stacked();
    FiberReport rep = validate(e);
    REQUIRE(rep.valid);
    auto rounds = round_sets(rep.fibers[0].rounds);
    REQUIRE(rounds.size() == 3);
    CHECK(rounds[0] == std::set<VertexId>{5}); // F_2
    CHECK(rounds[1] == std::set<VertexId>{3}); // C_3
    CHECK(rounds[2] == std::set<VertexId>{4}); // F_1 lands on C_2 last
}

TEST_CASE("mothers agree between the two jumping completions") {
    for (ExtendedGraph e : {jump_separate(), jump_stacked()}) {
        MotherAssignment a = mother_map(e);
        CHECK(a.mother.at(4) == 2); // F_1 is born on C_2 in both
        CHECK(a.mother.at(5) == 3); // F_2 on C_3
        CHECK(a.base_point_class.at(4) != a.base_point_class.at(5));
    }
}

TEST_CASE("the two jumping completions normalize identically") {
    NormalizedExtendedGraph d1 = normalize(jump_separate());
    NormalizedExtendedGraph d2 = normalize(jump_stacked());
    CHECK(d1.code() == d2.code());
    int total1 = 0, ones = 0;
    for (const auto& [v, d] : d1.delta) {
        total1 += d;
        if (d == 1) ++ones;
    }
    CHECK(total1 == 2);
    CHECK(ones == 2); // delta = 1 on C_2 and on C_3
}

TEST_CASE("a fiber of two (-2)-curves without feathers is rejected") {
    ExtendedGraph e = zigzag_completion({-2, -2});
    FiberReport rep = validate(e);
    CHECK(!rep.valid);
    CHECK(rep.fibers[0].reason == "contraction stalls");
    CHECK_THROWS_WITH_AS(contract_canonically(e), doctest::Contains("stalls"), Error);
}

TEST_CASE("distinguished vertex must end at weight zero") {
    ExtendedGraph e = zigzag_completion({-1});
    FiberReport rep = validate(e);
    CHECK(!rep.valid);
    CHECK(rep.fibers[0].reason == "distinguished vertex ends at nonzero weight");
}

TEST_CASE("a bare 0-fiber needs no contraction") {
    ExtendedGraph e = zigzag_completion({0});
    FiberReport rep = validate(e);
    REQUIRE(rep.valid);
    CHECK(rep.fibers[0].rounds.empty());
    CHECK(rep.fibers[0].multiplicities.at(2) == 1);
}

TEST_CASE("fiber multiplicities of the chain [-2,-1,-2]") {
    ExtendedGraph e = zigzag_completion({-2, -1, -2});
    FiberReport rep = validate(e);
    REQUIRE(rep.valid);
    CHECK(rep.fibers[0].multiplicities.at(2) == 1);
    CHECK(rep.fibers[0].multiplicities.at(3) == 2);
    CHECK(rep.fibers[0].multiplicities.at(4) == 1);
}

TEST_CASE("star components arise from inner contractions only") {
    // [[0,0,-2,-1,-2]]: C_3 is contracted between C_2 and C_4
    MotherAssignment a = mother_map(zigzag_completion({-2, -1, -2}));
    CHECK(a.kind.at(3) == ComponentKind::Star);
    CHECK(a.kind.at(2) == ComponentKind::Plus);
    CHECK(a.kind.at(4) == ComponentKind::Plus);
    // [[0,0,-1,-2,-1]]: the chain peels from the tip, no inner contraction
    MotherAssignment b = mother_map(zigzag_completion({-1, -2, -1}));
    for (const auto& [v, k] : b.kind) CHECK(k == ComponentKind::Plus);
}

TEST_CASE("contraction spends exactly size-minus-one blowdowns per fiber") {
    for (ExtendedGraph e : {jump_separate(), jump_stacked(), models::danilov_gizatullin(5, 2)}) {
        ContractionTranscript t = contract_canonically(e);
        for (std::size_t i = 0; i < e.fibers.size(); ++i) {
            std::size_t blowdowns = 0;
            for (const auto& r : t.per_fiber[i]) blowdowns += r.contracted.size();
            CHECK(blowdowns == e.fibers[i].members.size() - 1);
        }
    }
}

TEST_CASE("assemble recovers the extended structure from roles") {
    ExtendedGraph e = models::danilov_gizatullin(4, 2);
    ExtendedGraph r = assemble(e.graph);
    CHECK(r.section == e.section);
    CHECK(r.full_fibers == e.full_fibers);
    REQUIRE(r.fibers.size() == 1);
    std::vector<VertexId> want = e.fibers[0].members;
    std::sort(want.begin(), want.end());
    CHECK(r.fibers[0].members == want);
    CHECK(r.fibers[0].distinguished == e.fibers[0].distinguished);
}

TEST_CASE("feather weight does not change the normalized graph") {
    for (int n = 3; n <= 7; ++n) {
        NormalizedExtendedGraph base = normalize(models::danilov_gizatullin(n, 1));
        for (int r = 2; r < n; ++r) {
            ExtendedGraph e = models::danilov_gizatullin(n, r);
            MotherAssignment a = mother_map(e);
            CHECK(a.mother.at(static_cast<VertexId>(n + 1)) == models::chain_vertex(2));
            CHECK(a.mother.at(static_cast<VertexId>(n + 2)) == models::chain_vertex(n));
            CHECK(normalize(e).code() == base.code());
        }
    }
}

TEST_CASE("special model delta counts") {
    for (int n = 3; n <= 6; ++n)
        for (int t = 2; t <= n; ++t)
            for (int r = 1; r <= 3; ++r) {
                NormalizedExtendedGraph d = models::special_gizatullin(n, r, t);
                int dt = d.delta.at(models::chain_vertex(t));
                if (t == 2 || t == n)
                    CHECK(dt == r + 1);
                else
                    CHECK(dt == r);
                int total = 0;
                for (const auto& [v, x] : d.delta) total += x;
                CHECK(total == r + 2);
            }
}

TEST_CASE("special model realized graphs are contractible") {
    for (int n = 3; n <= 6; ++n)
        for (int t = 2; t <= n; ++t)
            for (int r = 1; r <= 3; ++r) {
                NormalizedExtendedGraph d = models::special_gizatullin(n, r, t);
                CHECK(validate(assemble(d.realized())).valid);
            }
}

TEST_CASE("outer elementary transformation only moves the section weight") {
    for (ExtendedGraph e : {jump_separate(), models::danilov_gizatullin(4, 2)}) {
        NormalizedExtendedGraph before = normalize(e);
        ExtendedGraph moved = elem_outer_at_full_fiber(e, e.full_fibers[0]);
        moved.check_structure();
        CHECK(moved.graph.vertex(moved.section).weight ==
              e.graph.vertex(e.section).weight + 1);
        NormalizedExtendedGraph after = normalize(moved);
        for (const auto& v : after.boundary.vertices())
            if (v.role == Role::Section)
                after.boundary.set_weight(v.id, v.weight - 1);
        CHECK(after.code() == before.code());
    }
}
