#include "dg/emit.hpp"

#include <json.hpp>

namespace dg {
namespace emit {

using nlohmann::json;

std::string emit_dot(const WeightedGraph& g) {
    std::string out = "graph dual {\n";
    for (const auto& v : g.vertices()) {
        out += "  v" + std::to_string(v.id) + " [label=\"";
        out += v.name.empty() ? "v" + std::to_string(v.id) : v.name;
        out += "\\nw=" + std::to_string(v.weight);
        if (v.genus > 0) out += ", g=" + std::to_string(v.genus);
        out += "\"";
        if (v.role == Role::Feather) out += ", style=dashed";
        if (v.role == Role::Section) out += ", peripheries=2";
        out += "];\n";
    }
    for (const auto& [a, b] : g.edges())
        out += "  v" + std::to_string(a) + " -- v" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

namespace {

json graph_value(const WeightedGraph& g) {
    json vertices = json::object();
    for (const auto& v : g.vertices()) {
        json entry = {{"weight", v.weight}, {"role", role_name(v.role)}};
        if (v.genus > 0) entry["genus"] = v.genus;
        if (!v.name.empty()) entry["name"] = v.name;
        vertices["v" + std::to_string(v.id)] = entry;
    }
    json edges = json::array();
    for (const auto& [a, b] : g.edges())
        edges.push_back({"v" + std::to_string(a), "v" + std::to_string(b)});
    return {{"vertices", vertices}, {"edges", edges}};
}

} // namespace

std::string graph_json(const WeightedGraph& g) { return graph_value(g).dump(2) + "\n"; }

std::string normalized_json(const extended::NormalizedExtendedGraph& d) {
    json delta = json::object();
    for (const auto& [v, count] : d.delta) delta["v" + std::to_string(v)] = count;
    json out = {{"boundary", graph_value(d.boundary)}, {"delta", delta}};
    return out.dump(2) + "\n";
}

std::string invariant_json(const invariants::ConfigurationInvariant& inv) {
    json entries = json::object();
    for (const auto& [v, cfg] : inv.entries) {
        json points = json::array();
        for (const auto& p : cfg.points) points.push_back(p.str());
        entries["v" + std::to_string(v)] = {
            {"kind", cfg.kind == extended::ComponentKind::Star ? "star" : "plus"},
            {"points", points}};
    }
    json out = {{"configuration", entries}};
    return out.dump(2) + "\n";
}

std::string error_json(ErrorCode code, const std::string& message) {
    json out = {{"error", error_code_name(code)}, {"message", message}};
    return out.dump() + "\n";
}

} // namespace emit
} // namespace dg
