// End-to-end checks, one per banner line; exits nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "dg/dsl.hpp"
#include "dg/emit.hpp"
#include "dg/invariants.hpp"
#include "dg/models.hpp"
#include "dg/presentation.hpp"
#include "dg/surgery.hpp"

using namespace dg;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<void()>& body) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body();
    } catch (const std::exception& e) {
        detail = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("criterion %2d: %s  %s (%lld ms)%s%s\n", number,
                detail.empty() ? "PASS" : "FAIL", label.c_str(), static_cast<long long>(ms),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!detail.empty()) ++failures;
}

void expect(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

std::string data_file(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    expect(in.good(), "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_cli(const std::string& args, int* status = nullptr) {
    std::string cmd = std::string(DGCALC_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    expect(pipe != nullptr, "cannot spawn the cli");
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int raw = pclose(pipe);
    if (status) *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

// every extended graph declared in the shipped corpus files
std::vector<std::pair<std::string, extended::ExtendedGraph>> corpus_extendeds() {
    std::vector<std::pair<std::string, extended::ExtendedGraph>> out;
    for (const auto& entry : std::filesystem::directory_iterator(DATA_DIR)) {
        if (entry.path().extension() != ".g") continue;
        dsl::Document doc = dsl::parse(slurp(entry.path().string()));
        for (const auto& [name, e] : doc.extendeds) out.emplace_back(name, e);
    }
    expect(!out.empty(), "no extended graphs in the corpus");
    return out;
}

Rational rnd_rational(std::mt19937& rng) {
    std::uniform_int_distribution<std::int64_t> num(-12, 12), den(1, 7);
    return Rational(num(rng), den(rng));
}

extended::ExtendedGraph grow_random(std::mt19937& rng, int ops) {
    extended::ExtendedGraph e;
    e.graph.add_vertex(0, Role::FiberZero, 0, "C_0");
    e.graph.add_vertex(0, Role::Section, 0, "C_1");
    e.graph.add_vertex(0, Role::Boundary, 0, "C_2");
    e.graph.add_edge(0, 1);
    e.graph.add_edge(1, 2);
    e.section = 1;
    e.full_fibers = {0};
    extended::Fiber f;
    f.distinguished = 2;
    f.members = {2};
    e.fibers.push_back(f);
    std::vector<VertexId> chain{2};
    auto& fiber = e.fibers[0];
    for (int k = 0; k < ops; ++k) {
        int move = static_cast<int>(rng() % 3);
        if (move == 0) {
            VertexId tip = chain.back();
            VertexId v = e.graph.add_vertex(-1, Role::Boundary);
            e.graph.add_edge(tip, v);
            e.graph.set_weight(tip, e.graph.vertex(tip).weight - 1);
            chain.push_back(v);
            fiber.members.push_back(v);
        } else if (move == 1) {
            VertexId c = chain[rng() % chain.size()];
            VertexId v = e.graph.add_vertex(-1, Role::Feather);
            e.graph.add_edge(c, v);
            e.graph.set_weight(c, e.graph.vertex(c).weight - 1);
            fiber.members.push_back(v);
        } else if (chain.size() >= 2) {
            std::size_t i = rng() % (chain.size() - 1);
            VertexId a = chain[i], b = chain[i + 1];
            VertexId v = e.graph.add_vertex(-1, Role::Boundary);
            e.graph.remove_edge(a, b);
            e.graph.add_edge(a, v);
            e.graph.add_edge(v, b);
            e.graph.set_weight(a, e.graph.vertex(a).weight - 1);
            e.graph.set_weight(b, e.graph.vertex(b).weight - 1);
            chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(i) + 1, v);
            fiber.members.push_back(v);
        }
    }
    std::sort(fiber.members.begin(), fiber.members.end());
    return e;
}

void enumerate_tails(int len, int lo, int hi, std::vector<int>& tail,
                     const std::function<void(const std::vector<int>&)>& fn) {
    if (len == 0) {
        fn(tail);
        return;
    }
    for (int w = lo; w <= hi; ++w) {
        tail.push_back(w);
        enumerate_tails(len - 1, lo, hi, tail, fn);
        tail.pop_back();
    }
}

} // namespace

int main() {
    criterion(1, "both jumping completions normalize to the same graph", [] {
        dsl::Document doc = dsl::parse(slurp(data_file("jump.g")));
        extended::NormalizedExtendedGraph d1 = extended::normalize(doc.extendeds.at("Dsep"));
        extended::NormalizedExtendedGraph d2 = extended::normalize(doc.extendeds.at("Dstack"));
        expect(d1.code() == d2.code(), "normalized graphs differ");
        std::multiset<int> counts;
        for (const auto& [v, c] : d1.delta) counts.insert(c);
        expect(counts == std::multiset<int>{0, 0, 1, 1}, "delta is not 1 on C_2 and C_3");
        int s1 = -1, s2 = -1;
        std::string j1 = run_cli("normalize --json " + data_file("jump.g") + " Dsep", &s1);
        std::string j2 = run_cli("normalize --json " + data_file("jump.g") + " Dstack", &s2);
        expect(s1 == 0 && s2 == 0, "cli normalize failed");
        expect(!j1.empty() && j1 == j2, "cli json outputs are not byte-identical");
    });

    criterion(2, "single-feather completions form one equivalence class", [] {
        for (int n = 3; n <= 7; ++n) {
            extended::NormalizedExtendedGraph base =
                extended::normalize(models::danilov_gizatullin(n, 1));
            for (int r = 1; r < n; ++r) {
                extended::ExtendedGraph e = models::danilov_gizatullin(n, r);
                extended::MotherAssignment a = extended::mother_map(e);
                expect(a.mother.at(static_cast<VertexId>(n + 1)) == models::chain_vertex(2),
                       "mother of the heavy feather is not C_2");
                extended::NormalizedExtendedGraph d = extended::normalize(e);
                expect(d.code() == base.code(), "normalization depends on the feather weight");
                for (int s = 1; s < n; ++s) {
                    auto v = invariants::decide_equivalence(
                        d, 0, extended::normalize(models::danilov_gizatullin(n, s)), 0);
                    expect(v.equivalent, "pair not equivalent");
                }
            }
        }
    });

    criterion(3, "feather counts of the special models follow the edge rule", [] {
        for (int n = 3; n <= 6; ++n)
            for (int t = 2; t <= n; ++t)
                for (int r = 1; r <= 3; ++r) {
                    extended::NormalizedExtendedGraph d = models::special_gizatullin(n, r, t);
                    int dt = d.delta.at(models::chain_vertex(t));
                    int want = (t == 2 || t == n) ? r + 1 : r;
                    expect(dt == want, "wrong feather count at C_t");
                }
    });

    criterion(4, "reversion reverses the tail, is an involution, and replays", [] {
        for (int len = 0; len <= 6; ++len) {
            std::vector<int> tail;
            enumerate_tails(len, -5, -2, tail, [&](const std::vector<int>& t) {
                Zigzag z{{0, 0}};
                z.weights.insert(z.weights.end(), t.begin(), t.end());
                auto [once, tr] = surgery::reverse(z);
                Zigzag want{{0, 0}};
                want.weights.insert(want.weights.end(), t.rbegin(), t.rend());
                expect(once == want, "reversed tail mismatch");
                auto [twice, tr2] = surgery::reverse(once);
                expect(twice == z, "not an involution");
                WeightedGraph g = tr.initial;
                for (const auto& s : tr.steps) g = surgery::apply_step(g, s);
                expect(canonical_code(g) == canonical_code(tr.final),
                       "transcript replay diverges");
                auto back = as_zigzag(g);
                expect(back && *back == once, "replay endpoint is not the reversion");
            });
        }
    });

    criterion(5, "reachable standard forms are the standardization and its reversal", [] {
        // reversed chains are isomorphic graphs, so each unordered chain is
        // checked once and the verdict reused for its mirror
        std::set<std::vector<int>> done;
        for (int len = 1; len <= 5; ++len) {
            std::vector<int> tail;
            enumerate_tails(len, -3, 1, tail, [&](const std::vector<int>& w) {
                std::vector<int> rev(w.rbegin(), w.rend());
                if (!done.insert(std::min(w, rev)).second) return;
                WeightedGraph g = make_chain(w);
                surgery::StandardizeResult std_form;
                try {
                    std_form = surgery::standardize(g, {3, 10, 20000});
                } catch (const Error&) {
                    return; // outside the budget
                }
                std::set<CanonicalCode> want{canonical_code(std_form.graph)};
                if (auto z = as_zigzag(std_form.graph)) {
                    try {
                        auto [rev_z, tr] = surgery::reverse(*z);
                        want.insert(canonical_code(make_chain(rev_z.weights)));
                    } catch (const Error&) {
                        // chains without a zero pair admit no reversion
                    }
                }
                auto found = surgery::confluence_oracle(g, 3, 10);
                expect(found.size() <= 2, "more than two standard forms");
                expect(found == want, "oracle set differs from {std, reverse(std)}");
            });
        }
    });

    criterion(6, "corpus fibers contract to their base with size-1 blowdowns", [] {
        for (const auto& [name, e] : corpus_extendeds()) {
            extended::FiberReport rep = extended::validate(e);
            expect(rep.valid, name + " does not validate");
            for (std::size_t i = 0; i < e.fibers.size(); ++i) {
                std::size_t blowdowns = 0;
                for (const auto& r : rep.fibers[i].rounds) blowdowns += r.contracted.size();
                expect(blowdowns == e.fibers[i].members.size() - 1, "wrong blowdown count");
            }
        }
        // two (-2)-curves with no feathers cannot be a fiber
        extended::ExtendedGraph bad;
        bad.graph.add_vertex(0, Role::FiberZero);
        bad.graph.add_vertex(0, Role::Section);
        bad.graph.add_vertex(-2, Role::Boundary);
        bad.graph.add_vertex(-2, Role::Boundary);
        for (VertexId v = 0; v < 3; ++v) bad.graph.add_edge(v, v + 1);
        bad.section = 1;
        bad.full_fibers = {0};
        bad.fibers.push_back({2, {2, 3}});
        expect(!extended::validate(bad).valid, "uncontractible fiber accepted");
    });

    criterion(7, "canonical point configurations are orbit invariants", [] {
        std::mt19937 rng(71);
        std::uniform_int_distribution<int> size(0, 5);
        for (int trial = 0; trial < 100; ++trial) {
            invariants::PointConfig plus, star;
            plus.kind = extended::ComponentKind::Plus;
            star.kind = extended::ComponentKind::Star;
            int n = size(rng);
            for (int i = 0; i < n; ++i) {
                plus.points.push_back(rnd_rational(rng));
                Rational p = rnd_rational(rng);
                star.points.push_back(p.is_zero() ? Rational(1, 3) : p);
            }
            invariants::PointConfig plus_base = invariants::canonical_config(plus);
            invariants::PointConfig star_base = invariants::canonical_config(star);
            expect(invariants::canonical_config(plus_base) == plus_base, "not idempotent");
            expect(invariants::canonical_config(star_base) == star_base, "not idempotent");
            for (int m = 0; m < 100; ++m) {
                Rational a = rnd_rational(rng);
                if (a.is_zero()) a = Rational(2);
                Rational b = rnd_rational(rng);
                invariants::PointConfig moved_plus = plus, moved_star = star;
                for (auto& p : moved_plus.points) p = a * p + b;
                for (auto& p : moved_star.points) p = a * p;
                expect(invariants::canonical_config(moved_plus) == plus_base,
                       "affine image canonicalizes differently");
                expect(invariants::canonical_config(moved_star) == star_base,
                       "scaled image canonicalizes differently");
            }
        }
    });

    criterion(8, "outer elementary transformations only move the section weight", [] {
        for (const auto& [name, e] : corpus_extendeds()) {
            extended::NormalizedExtendedGraph before = extended::normalize(e);
            for (VertexId c0 : e.full_fibers) {
                extended::ExtendedGraph moved = extended::elem_outer_at_full_fiber(e, c0);
                extended::NormalizedExtendedGraph after = extended::normalize(moved);
                for (const auto& v : after.boundary.vertices())
                    if (v.role == Role::Section)
                        after.boundary.set_weight(v.id, v.weight - 1);
                expect(after.code() == before.code(),
                       name + ": delta or boundary changed under an outer move");
            }
        }
    });

    criterion(9, "schedules instantiate back to their normalized graph", [] {
        extended::NormalizedExtendedGraph jump =
            dsl::parse(slurp(data_file("jump.g"))).normalizeds.at("Djump");
        expect(presentation::presentation_dimension(jump, 0) == 4,
               "jumping example dimension is not 1 + 3");
        std::mt19937 rng(9001);
        int built = 0;
        while (built < 50) {
            extended::ExtendedGraph grown = grow_random(rng, 2 + static_cast<int>(rng() % 8));
            if (grown.graph.vertex_count() > 12) continue;
            extended::NormalizedExtendedGraph d = extended::normalize(grown);
            presentation::BlowupSchedule s = presentation::schedule_from(d, 0);
            for (int assignment = 0; assignment < 5; ++assignment) {
                std::map<std::string, Rational> params;
                std::set<Rational> used{Rational(0)};
                auto fresh = [&]() {
                    for (;;) {
                        Rational p(static_cast<std::int64_t>(rng() % 2000) - 1000,
                                   static_cast<std::int64_t>(rng() % 9) + 1);
                        if (!p.is_zero() && used.insert(p).second) return p;
                    }
                };
                for (const auto& slot : s.skeleton_slots) params[slot] = fresh();
                for (const auto& step : s.steps)
                    if (!step.slot.empty()) params[step.slot] = fresh();
                presentation::Instance inst = presentation::instantiate(s, params);
                expect(extended::normalize(inst.ext).code() == d.code(),
                       "instance does not normalize back");
            }
            ++built;
        }
    });

    criterion(10, "reversion pairs the special models; configurations give moduli", [] {
        for (int n = 4; n <= 6; ++n)
            for (int t = 2; t <= n; ++t)
                for (int r = 1; r <= 3; ++r) {
                    auto v = invariants::decide_equivalence(
                        models::special_gizatullin(n, r, t), 0,
                        models::special_gizatullin(n, r, n - t + 2), 0);
                    expect(v.equivalent, "special model not equivalent to its reversal");
                    auto want = t == n - t + 2 ? invariants::Witness::DirectIso
                                               : invariants::Witness::ReversedIso;
                    expect(v.witness == want, "wrong witness for the reversal pair");
                }
        // three feathers on C_3 of the (5,3,3) model: affine-related centers
        // give the same configuration invariant, unrelated ones do not
        extended::NormalizedExtendedGraph d = models::special_gizatullin(5, 3, 3);
        presentation::BlowupSchedule s = presentation::schedule_from(d, 0);
        auto instantiate_at = [&](const std::map<VertexId, Rational>& centers) {
            std::map<std::string, Rational> params;
            Rational filler(100);
            for (const auto& slot : s.skeleton_slots) {
                params[slot] = filler;
                filler = filler + Rational(1);
            }
            for (const auto& step : s.steps) {
                if (step.slot.empty()) continue;
                auto it = centers.find(step.creates);
                if (it != centers.end()) {
                    params[step.slot] = it->second;
                } else {
                    params[step.slot] = filler;
                    filler = filler + Rational(1);
                }
            }
            presentation::Instance inst = presentation::instantiate(s, params);
            return invariants::configuration_invariant(inst.ext, inst.coords).str();
        };
        std::vector<VertexId> on_c3;
        for (const auto& step : s.steps)
            if (step.type == presentation::StepType::FeatherOuter && step.target == 3)
                on_c3.push_back(step.creates);
        expect(on_c3.size() == 3, "expected three feather steps on C_3");
        auto centers = [&](Rational a, Rational b, Rational c) {
            return std::map<VertexId, Rational>{{on_c3[0], a}, {on_c3[1], b}, {on_c3[2], c}};
        };
        std::string evenly = instantiate_at(centers(Rational(1), Rational(2), Rational(3)));
        std::string moved = instantiate_at(centers(Rational(7), Rational(9), Rational(11)));
        std::string skewed = instantiate_at(centers(Rational(1), Rational(2), Rational(4)));
        expect(evenly == moved, "affine-related configurations disagree");
        expect(evenly != skewed, "distinct configurations collapse");
    });

    return failures == 0 ? 0 : 1;
}
