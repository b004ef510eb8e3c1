#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dg/dsl.hpp"
#include "dg/emit.hpp"
#include "dg/invariants.hpp"
#include "dg/models.hpp"
#include "dg/presentation.hpp"
#include "dg/surgery.hpp"

namespace {

using namespace dg;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dsl::Document load(const std::string& path) { return dsl::parse(read_file(path)); }

WeightedGraph item_as_graph(const dsl::Document& doc, const std::string& name) {
    if (auto it = doc.zigzags.find(name); it != doc.zigzags.end())
        return make_chain(it->second.weights);
    if (auto it = doc.graphs.find(name); it != doc.graphs.end()) return it->second;
    if (auto it = doc.extendeds.find(name); it != doc.extendeds.end()) return it->second.graph;
    if (auto it = doc.normalizeds.find(name); it != doc.normalizeds.end())
        return it->second.realized();
    fail(ErrorCode::UnknownReference, "no item named '" + name + "'");
}

extended::NormalizedExtendedGraph item_as_normalized(const dsl::Document& doc,
                                                     const std::string& name) {
    if (auto it = doc.normalizeds.find(name); it != doc.normalizeds.end()) return it->second;
    if (auto it = doc.extendeds.find(name); it != doc.extendeds.end())
        return extended::normalize(it->second);
    fail(ErrorCode::UnknownReference, "no extended or normalized item named '" + name + "'");
}

std::string zigzag_str(const std::vector<int>& w) {
    std::string s = "[[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i]);
    }
    return s + "]]";
}

std::string normalized_text(const extended::NormalizedExtendedGraph& d) {
    std::string out = "boundary:";
    for (const auto& v : d.boundary.vertices())
        out += " " + (v.name.empty() ? "v" + std::to_string(v.id) : v.name) + "(" +
               std::to_string(v.weight) + ")";
    out += "\ndelta:";
    for (const auto& [v, count] : d.delta) {
        const auto& lbl = d.boundary.vertex(v);
        out += " " + (lbl.name.empty() ? "v" + std::to_string(v) : lbl.name) + "=" +
               std::to_string(count);
    }
    return out + "\n";
}

int run_check(const std::string& file) {
    dsl::Document doc = load(file);
    bool ok = true;
    for (const auto& [kind, name] : doc.order) {
        switch (kind) {
        case dsl::ItemKind::Zigzag: {
            ChainClass c = classify_chain(doc.zigzags.at(name));
            const char* label = c.kind == ChainKind::Standard      ? "standard"
                                : c.kind == ChainKind::SemiStandard ? "semi-standard"
                                                                    : "not standard";
            std::cout << "zigzag " << name << ": " << label << "\n";
            break;
        }
        case dsl::ItemKind::Graph: {
            const auto& g = doc.graphs.at(name);
            std::cout << "graph " << name << ": "
                      << (is_standard_graph(g, false)  ? "standard"
                          : is_standard_graph(g, true) ? "semi-standard"
                                                       : "not standard")
                      << "\n";
            break;
        }
        case dsl::ItemKind::Extended: {
            extended::FiberReport report = extended::validate(doc.extendeds.at(name));
            std::cout << "extended " << name << ": "
                      << (report.valid ? "valid" : "invalid") << "\n";
            if (!report.valid) {
                ok = false;
                for (const auto& pf : report.fibers)
                    if (!pf.ok) std::cout << "  fiber: " << pf.reason << "\n";
            }
            break;
        }
        case dsl::ItemKind::Normalized: {
            std::cout << "normalized " << name << ": "
                      << doc.normalizeds.at(name).boundary.vertex_count() << " components\n";
            break;
        }
        case dsl::ItemKind::Instance: {
            const auto& inst = doc.instances.at(name);
            try {
                auto sched = presentation::schedule_from(
                    doc.normalizeds.at(inst.schedule_of), inst.genus);
                presentation::instantiate(sched, inst.params);
                std::cout << "instance " << name << ": valid\n";
            } catch (const Error& e) {
                std::cout << "instance " << name << ": invalid (" << e.what() << ")\n";
                ok = false;
            }
            break;
        }
        }
    }
    return ok ? 0 : 1;
}

std::pair<int, int> parse_genus_pair(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        fail(ErrorCode::SyntaxError, "--genus expects G1,G2");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calculus of weighted dual graphs of affine ruled surfaces"};
    app.require_subcommand(1);

    std::string file, item, item2, transcript_out, genus_pair = "0,0";
    int genus = 0, depth = 3;
    std::size_t cap = 200000;
    bool json = false;

    auto* check = app.add_subcommand("check", "validate every item in a file");
    check->add_option("file", file)->required();

    auto* standardize = app.add_subcommand("standardize", "bring a graph to standard form");
    standardize->add_option("file", file)->required();
    standardize->add_option("item", item)->required();
    standardize->add_option("--transcript", transcript_out, "write the surgery log here");

    auto* reverse = app.add_subcommand("reverse", "reversion of a zigzag");
    reverse->add_option("file", file)->required();
    reverse->add_option("item", item)->required();

    auto* normalize = app.add_subcommand("normalize", "normalized extended graph of an item");
    normalize->add_option("file", file)->required();
    normalize->add_option("item", item)->required();
    normalize->add_flag("--json", json);

    auto* equiv = app.add_subcommand("equiv", "decide deformation equivalence");
    equiv->add_option("file", file)->required();
    equiv->add_option("item1", item)->required();
    equiv->add_option("item2", item2)->required();
    equiv->add_option("--genus", genus_pair, "comma-separated pair G1,G2");

    auto* moduli = app.add_subcommand("moduli", "delta map, kinds and configuration dimensions");
    moduli->add_option("file", file)->required();
    moduli->add_option("item", item)->required();

    auto* schedule = app.add_subcommand("schedule", "blowup schedule and dimension");
    schedule->add_option("file", file)->required();
    schedule->add_option("item", item)->required();
    schedule->add_option("--genus", genus);

    auto* oracle = app.add_subcommand("oracle", "reachable standard forms");
    oracle->add_option("file", file)->required();
    oracle->add_option("item", item)->required();
    oracle->add_option("--depth", depth, "blowup depth");
    oracle->add_option("--cap", cap, "node budget");

    auto* dot = app.add_subcommand("dot", "Graphviz source for an item");
    dot->add_option("file", file)->required();
    dot->add_option("item", item)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return run_check(file);
        dsl::Document doc = load(file);
        if (standardize->parsed()) {
            auto result = surgery::standardize(item_as_graph(doc, item));
            if (auto z = as_zigzag(result.graph))
                std::cout << zigzag_str(z->weights) << "\n";
            else
                std::cout << emit::graph_json(result.graph);
            if (!transcript_out.empty()) {
                std::ofstream out(transcript_out);
                out << result.transcript.to_log();
            }
        } else if (reverse->parsed()) {
            auto it = doc.zigzags.find(item);
            if (it == doc.zigzags.end())
                fail(ErrorCode::UnknownReference, "no zigzag named '" + item + "'");
            auto [z, log] = surgery::reverse(it->second);
            std::cout << zigzag_str(z.weights) << "\n";
        } else if (normalize->parsed()) {
            extended::NormalizedExtendedGraph d = item_as_normalized(doc, item);
            std::cout << (json ? emit::normalized_json(d) : normalized_text(d));
        } else if (equiv->parsed()) {
            auto [g1, g2] = parse_genus_pair(genus_pair);
            invariants::Verdict v = invariants::decide_equivalence(
                item_as_normalized(doc, item), g1, item_as_normalized(doc, item2), g2);
            std::cout << (v.equivalent ? "equivalent" : "not equivalent") << " ("
                      << invariants::witness_name(v.witness) << ")\n";
            return v.equivalent ? 0 : 1;
        } else if (moduli->parsed()) {
            extended::NormalizedExtendedGraph d = item_as_normalized(doc, item);
            extended::MotherAssignment a = extended::mother_map(extended::assemble(d.realized()));
            std::map<VertexId, extended::ComponentKind> kinds;
            for (const auto& [v, kind] : a.kind)
                if (d.delta.count(v)) kinds[v] = kind;
            invariants::ConfigSpaceDim dims = invariants::config_space_dim(d, kinds);
            for (const auto& [v, count] : d.delta) {
                const auto& lbl = d.boundary.vertex(v);
                std::cout << (lbl.name.empty() ? "v" + std::to_string(v) : lbl.name)
                          << ": delta=" << count << " kind="
                          << (kinds.count(v) && kinds[v] == extended::ComponentKind::Star
                                  ? "star"
                                  : "plus")
                          << " dim=" << dims.per_component[v] << "\n";
            }
            std::cout << "total dimension: " << dims.total << "\n";
        } else if (schedule->parsed()) {
            auto sched = presentation::schedule_from(item_as_normalized(doc, item), genus);
            for (const auto& slot : sched.skeleton_slots)
                std::cout << "skeleton slot " << slot << "\n";
            std::cout << sched.to_text();
            std::cout << "dimension: "
                      << presentation::presentation_dimension(item_as_normalized(doc, item),
                                                             genus)
                      << "\n";
        } else if (oracle->parsed()) {
            auto forms = surgery::confluence_oracle(item_as_graph(doc, item), depth, 24, true,
                                                    cap);
            std::cout << "standard forms reached: " << forms.size() << "\n";
            for (const auto& code : forms) std::cout << code.bytes << "\n";
        } else if (dot->parsed()) {
            std::cout << emit::emit_dot(item_as_graph(doc, item));
        }
        return 0;
    } catch (const Error& e) {
        if (json)
            std::cerr << emit::error_json(e.code(), e.what());
        else
            std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::SyntaxError ? 3 : 1;
    }
}
