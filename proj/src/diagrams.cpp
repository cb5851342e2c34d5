#include "aasrdl/diagrams.hpp"

#include "aasrdl/printer.hpp"
#include "aasrdl/static_analysis.hpp"

#include <algorithm>
#include <set>

namespace aasrdl {

DotGraph mode_transition_diagram(const Model& model)
{
    DotGraph g;
    g.name = model.name + "_modes";
    g.graph_attrs = {{"rankdir", "LR"}, {"label", model.name}};
    g.node_defaults = {{"shape", "circle"}};
    IdAllocator ids;
    for (const auto& m : model.modes) {
        DotNode n{ids.get(m.name), {{"label", m.name}}};
        if (m.name == model.initial_mode) n.attrs.emplace_back("shape", "doublecircle");
        g.nodes.push_back(std::move(n));
    }
    for (const auto& m : model.modes) {
        for (const auto& t : m.transitions) {
            DotEdge e{ids.get(m.name), ids.get(t.target), {}};
            set_label(e.attrs, t.condition ? to_string(*t.condition) : "true");
            e.attrs.emplace_back("taillabel", std::to_string(t.priority));
            g.edges.push_back(std::move(e));
        }
    }
    return g;
}

namespace {

void collect_calls(const Block& b, std::vector<std::string>& out)
{
    for_each_stmt(b, [&](const Stmt& s) {
        if (const auto* c = s.as<Call>()) out.push_back(c->module);
    });
}

} // namespace

DotGraph module_relation_diagram(const Model& model, std::string_view mode_name)
{
    const Mode* mode = model.find_mode(mode_name);
    if (!mode) throw std::invalid_argument("unknown mode '" + std::string(mode_name) + "'");
    DotGraph g;
    g.name = model.name + "_" + mode->name + "_modules";
    g.graph_attrs = {{"label", mode->name}};
    g.node_defaults = {{"shape", "box"}};
    for (std::size_t i = 0; i < mode->procedures.size(); ++i) {
        const auto& p = mode->procedures[i];
        DotCluster c;
        c.id = "p" + std::to_string(i);
        c.attrs = {{"label", "period=" + std::to_string(p.period_ms)}};
        std::vector<std::string> calls;
        collect_calls(p.body, calls);
        std::string prev;
        for (std::size_t k = 0; k < calls.size(); ++k) {
            std::string id = "p" + std::to_string(i) + "_" + std::to_string(k) + "_" + sanitize_id(calls[k]);
            c.nodes.push_back({id, {{"label", calls[k]}}});
            if (!prev.empty()) g.edges.push_back({prev, id, {}});
            prev = id;
        }
        g.clusters.push_back(std::move(c));
    }
    return g;
}

DotGraph variable_dependency_diagram(const ModuleDef& module, const DataDict& dict)
{
    DepGraph dep = build_dep_graph(module, dict);
    std::set<std::string> in_cycle;
    std::set<std::pair<std::string, std::string>> cycle_edges;
    for (const auto& c : find_cycles(dep)) {
        if (c.size() < 2) continue;
        for (std::size_t i = 0; i < c.size(); ++i) {
            in_cycle.insert(c[i]);
            cycle_edges.insert({c[i], c[(i + 1) % c.size()]});
        }
    }
    auto has = [](const std::vector<std::string>& v, const std::string& n) {
        return std::find(v.begin(), v.end(), n) != v.end();
    };

    DotGraph g;
    g.name = module.name + "_vars";
    g.graph_attrs = {{"rankdir", "LR"}, {"label", module.name}};
    g.node_defaults = {{"shape", "ellipse"}};
    IdAllocator ids;
    for (const auto& n : dep.nodes) {
        DotNode node{ids.get(n), {{"label", n}}};
        if (has(module.outputs, n))
            node.attrs.insert(node.attrs.end(), {{"shape", "box"}, {"peripheries", "2"}});
        else if (has(module.inputs, n))
            node.attrs.emplace_back("shape", "box");
        if (in_cycle.count(n)) node.attrs.emplace_back("color", "red");
        g.nodes.push_back(std::move(node));
    }
    for (const auto& [a, b] : dep.edges) {
        DotEdge e{ids.get(a), ids.get(b), {}};
        if (cycle_edges.count({a, b})) e.attrs.emplace_back("color", "red");
        g.edges.push_back(std::move(e));
    }
    return g;
}

} // namespace aasrdl
