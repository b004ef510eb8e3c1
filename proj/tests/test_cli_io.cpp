#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "dg/dsl.hpp"
#include "dg/emit.hpp"
#include "dg/models.hpp"

using namespace dg;

namespace {

std::string data_file(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(DGCALC_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Validation;
}

} // namespace

TEST_CASE("zigzag declarations and the repeat shorthand") {
    dsl::Document doc = dsl::parse("zigzag a = [[0,0,(-2)_3]]\nzigzag b = [[0,0,-2,-2,-2]]");
    CHECK(doc.zigzags.at("a").weights == std::vector<int>{0, 0, -2, -2, -2});
    CHECK(doc.zigzags.at("a") == doc.zigzags.at("b"));
}

TEST_CASE("graph declarations carry weights, roles and genus") {
    dsl::Document doc = dsl::parse("graph g {\n"
                                   "  s w=-2 role=section genus=1;\n"
                                   "  f w=0 role=fiber0;\n"
                                   "  edges: s-f\n"
                                   "}\n");
    const WeightedGraph& g = doc.graphs.at("g");
    REQUIRE(g.vertex_count() == 2);
    VertexId s = doc.vertex_names.at("g").at("s");
    CHECK(g.vertex(s).weight == -2);
    CHECK(g.vertex(s).role == Role::Section);
    CHECK(g.vertex(s).genus == 1);
    CHECK(g.edges().size() == 1);
}

TEST_CASE("corpus files parse into the model builders' graphs") {
    dsl::Document doc = dsl::parse(slurp(data_file("danilov.g")));
    for (int r = 1; r <= 3; ++r) {
        const auto& e = doc.extendeds.at("DG4" + std::to_string(r));
        CHECK(canonical_code(e.graph) ==
              canonical_code(models::danilov_gizatullin(4, r).graph));
    }
    dsl::Document special = dsl::parse(slurp(data_file("special.g")));
    CHECK(special.normalizeds.at("S523").code() == models::special_gizatullin(5, 2, 3).code());
    CHECK(special.normalizeds.at("S524").code() == models::special_gizatullin(5, 2, 4).code());
}

TEST_CASE("parse errors carry position and expectation") {
    CHECK(code_of([] { dsl::parse("widget x = [[0]]"); }) == ErrorCode::SyntaxError);
    CHECK(code_of([] { dsl::parse("zigzag z = [[]]"); }) == ErrorCode::SyntaxError);
    CHECK(code_of([] { dsl::parse("zigzag z = [[0,0"); }) == ErrorCode::SyntaxError);
    CHECK(code_of([] { dsl::parse("zigzag z = [[1/2]]"); }) == ErrorCode::SyntaxError);
    try {
        dsl::parse("zigzag z =\n  [[0,,0]]");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("expected") != std::string::npos);
    }
    CHECK(code_of([] { dsl::parse("zigzag z = [[0]] zigzag z = [[0]]"); }) ==
          ErrorCode::DuplicateName);
    CHECK(code_of([] { dsl::parse("graph g { a w=0; edges: a-b }"); }) ==
          ErrorCode::UnknownReference);
    CHECK(code_of([] { dsl::parse("normalized n { boundary=nope; }"); }) ==
          ErrorCode::UnknownReference);
}

TEST_CASE("print/parse round trip is stable") {
    for (const char* file : {"jump.g", "danilov.g", "special.g", "zigzags.g"}) {
        dsl::Document doc = dsl::parse(slurp(data_file(file)));
        std::string printed = dsl::print(doc);
        dsl::Document again = dsl::parse(printed);
        CHECK(dsl::print(again) == printed);
        for (const auto& [name, z] : doc.zigzags) CHECK(again.zigzags.at(name) == z);
        for (const auto& [name, e] : doc.extendeds)
            CHECK(canonical_code(again.extendeds.at(name).graph) == canonical_code(e.graph));
        for (const auto& [name, d] : doc.normalizeds)
            CHECK(again.normalizeds.at(name).code() == d.code());
    }
}

TEST_CASE("dot output marks feathers and the section") {
    dsl::Document doc = dsl::parse(slurp(data_file("jump.g")));
    std::string dot = emit::emit_dot(doc.extendeds.at("Dsep").graph);
    CHECK(dot.rfind("graph dual {", 0) == 0);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("peripheries=2") != std::string::npos);
    CHECK(dot.find(" -- ") != std::string::npos);
}

TEST_CASE("json emitters are deterministic") {
    dsl::Document doc = dsl::parse(slurp(data_file("jump.g")));
    const auto& d = doc.normalizeds.at("Djump");
    CHECK(emit::normalized_json(d) == emit::normalized_json(d));
    CHECK(emit::graph_json(d.boundary) == emit::graph_json(d.boundary));
    std::string err = emit::error_json(ErrorCode::SlotViolation, "boom");
    CHECK(err.find("SlotViolation") != std::string::npos);
    CHECK(err.find("boom") != std::string::npos);
}

TEST_CASE("cli: check validates a whole file") {
    CHECK(run_cli("check " + data_file("jump.g")).status == 0);
    CHECK(run_cli("check " + data_file("danilov.g")).status == 0);
}

TEST_CASE("cli: reversion of a zigzag item") {
    RunResult r = run_cli("reverse " + data_file("zigzags.g") + " Z");
    CHECK(r.status == 0);
    CHECK(r.out == "[[0,0,-3,-2]]\n");
}

TEST_CASE("cli: normalizing both jumping completions is byte-identical") {
    RunResult a = run_cli("normalize --json " + data_file("jump.g") + " Dsep");
    RunResult b = run_cli("normalize --json " + data_file("jump.g") + " Dstack");
    CHECK(a.status == 0);
    CHECK(b.status == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("cli: equivalence verdicts and exit codes") {
    std::string f = data_file("special.g");
    RunResult rev = run_cli("equiv " + f + " S523 S524 --genus 0,0");
    CHECK(rev.status == 0);
    CHECK(rev.out.find("ReversedIso") != std::string::npos);
    RunResult genus = run_cli("equiv " + f + " S523 S524 --genus 0,1");
    CHECK(genus.status == 1);
    CHECK(genus.out.find("GenusMismatch") != std::string::npos);
}

TEST_CASE("cli: usage and parse failures use distinct exit codes") {
    CHECK(run_cli("frobnicate").status == 2);
    std::string bad = data_file("does_not_exist.g");
    CHECK(run_cli("check " + bad).status == 2);
    char tmpname[] = "/tmp/dgcalc_bad_XXXXXX";
    int fd = mkstemp(tmpname);
    REQUIRE(fd >= 0);
    FILE* f = fdopen(fd, "w");
    fputs("zigzag broken = [[0,", f);
    fclose(f);
    CHECK(run_cli(std::string("reverse ") + tmpname + " broken").status == 3);
    std::remove(tmpname);
}

TEST_CASE("cli: schedule and moduli reports") {
    RunResult sched = run_cli("schedule " + data_file("jump.g") + " Djump --genus 0");
    CHECK(sched.status == 0);
    CHECK(sched.out.find("dimension: 4") != std::string::npos);
    RunResult mod = run_cli("moduli " + data_file("special.g") + " S523");
    CHECK(mod.status == 0);
    CHECK(mod.out.find("total dimension:") != std::string::npos);
}

TEST_CASE("cli: oracle lists the reachable standard forms") {
    RunResult r = run_cli("oracle " + data_file("zigzags.g") + " Z --depth 2 --cap 20000");
    CHECK(r.status == 0);
    CHECK(r.out.find("standard forms reached: 2") != std::string::npos);
}
