#include "aasrdl/static_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace aasrdl {

std::string_view to_string(DiagCode c)
{
    switch (c) {
    case DiagCode::UndefinedVariable: return "UndefinedVariable";
    case DiagCode::UseBeforeInit: return "UseBeforeInit";
    case DiagCode::UndeclaredInput: return "UndeclaredInput";
    case DiagCode::UndeclaredOutput: return "UndeclaredOutput";
    case DiagCode::UnusedDeclaredIO: return "UnusedDeclaredIO";
    case DiagCode::DuplicateName: return "DuplicateName";
    case DiagCode::UncalledModule: return "UncalledModule";
    case DiagCode::CircularDependency: return "CircularDependency";
    }
    return "?";
}

bool DepGraph::has_edge(std::string_view from, std::string_view to) const
{
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.first == from && e.second == to; });
}

namespace {

class Checker {
public:
    explicit Checker(const Model& m) : m_(m) {}

    std::vector<Diagnostic> run()
    {
        undefined_names();
        duplicates();
        use_before_init();
        module_io();
        uncalled_modules();
        circular();
        std::stable_sort(out_.begin(), out_.end(), [](const Diagnostic& a, const Diagnostic& b) {
            return std::make_tuple(a.span.file_name(), a.span.line, a.code, a.span.col) <
                   std::make_tuple(b.span.file_name(), b.span.line, b.code, b.span.col);
        });
        return std::move(out_);
    }

private:
    void add(DiagCode code, Severity sev, const SourceSpan& span, std::string detail)
    {
        auto key = std::make_tuple(static_cast<int>(code), span.file_name(), span.line, span.col, detail);
        if (!seen_.insert(key).second) return;
        out_.push_back({code, sev, span, std::move(detail)});
    }

    // -- UndefinedVariable -------------------------------------------------
    // Names differing only in letter case are the usual culprit.
    std::string case_hint(const std::string& name) const
    {
        auto lower = [](std::string x) {
            std::transform(x.begin(), x.end(), x.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return x;
        };
        const std::string key = lower(name);
        for (const auto& d : m_.datadict.vars)
            if (lower(d.name) == key) return " (did you mean '" + d.name + "'?)";
        for (const auto& c : m_.datadict.constants)
            if (lower(c.name) == key) return " (did you mean '" + c.name + "'?)";
        return {};
    }

    void undefined_in_expr(const ExprPtr& e)
    {
        if (!e) return;
        for_each_var(*e, [&](const VarRef& v, const SourceSpan& s) {
            if (v.slot < 0)
                add(DiagCode::UndefinedVariable, Severity::Error, s, "undefined variable '" + v.name + "'" + case_hint(v.name));
        });
    }

    void undefined_in_block(const Block& b)
    {
        for_each_stmt(b, [&](const Stmt& s) {
            if (const auto* a = s.as<Assign>()) {
                if (a->slot < 0) {
                    std::string what = m_.datadict.find_const(a->target) ? "assignment to constant '"
                                                                          : "assignment to undefined variable '";
                    add(DiagCode::UndefinedVariable, Severity::Error, s.span, what + a->target + "'" + case_hint(a->target));
                }
                undefined_in_expr(a->value);
            } else if (const auto* i = s.as<If>()) {
                undefined_in_expr(i->cond);
            }
        });
    }

    void undefined_names()
    {
        for (const auto& mod : m_.modules) {
            for (const auto* list : {&mod.inputs, &mod.outputs})
                for (const auto& n : *list)
                    if (!m_.datadict.find_var(n))
                        add(DiagCode::UndefinedVariable, Severity::Error, mod.span,
                            "module '" + mod.name + "' declares undefined variable '" + n + "'");
            undefined_in_block(mod.task);
        }
        for (const auto& md : m_.modes) {
            undefined_in_expr(md.guard);
            for (const auto& p : md.procedures) undefined_in_block(p.body);
            for (const auto& t : md.transitions) {
                undefined_in_expr(t.condition);
                undefined_in_block(t.action);
            }
        }
    }

    // -- DuplicateName -------------------------------------------------------
    void duplicates()
    {
        std::set<std::string> data;
        for (const auto& c : m_.datadict.constants)
            if (!data.insert(c.name).second)
                add(DiagCode::DuplicateName, Severity::Error, c.span, "duplicate name '" + c.name + "'");
        for (const auto& v : m_.datadict.vars)
            if (!data.insert(v.name).second)
                add(DiagCode::DuplicateName, Severity::Error, v.span, "duplicate name '" + v.name + "'");
        std::set<std::string> mods;
        for (const auto& mod : m_.modules)
            if (!mods.insert(mod.name).second)
                add(DiagCode::DuplicateName, Severity::Error, mod.span, "duplicate module '" + mod.name + "'");
        std::set<std::string> modes;
        for (const auto& md : m_.modes)
            if (!modes.insert(md.name).second)
                add(DiagCode::DuplicateName, Severity::Error, md.span, "duplicate mode '" + md.name + "'");
    }

    // -- UseBeforeInit -------------------------------------------------------
    bool uninitialized(int slot) const
    {
        const auto& d = m_.datadict.vars[slot];
        return !d.init && d.kind == VarKind::Internal;
    }

    void reads(const ExprPtr& e, const std::set<int>& assigned)
    {
        if (!e) return;
        for_each_var(*e, [&](const VarRef& v, const SourceSpan& s) {
            if (v.slot >= 0 && uninitialized(v.slot) && !assigned.count(v.slot))
                add(DiagCode::UseBeforeInit, Severity::Error, s,
                    "'" + v.name + "' may be read before it is assigned and has no init value");
        });
    }

    void flow(const Block& b, std::set<int>& assigned, int depth)
    {
        if (depth > 64) return;
        for (const auto& s : b) {
            if (const auto* a = s.as<Assign>()) {
                reads(a->value, assigned);
                if (a->slot >= 0) assigned.insert(a->slot);
            } else if (const auto* i = s.as<If>()) {
                reads(i->cond, assigned);
                std::set<int> t = assigned, e = assigned;
                flow(i->then_block, t, depth);
                flow(i->else_block, e, depth);
                assigned.clear();
                std::set_intersection(t.begin(), t.end(), e.begin(), e.end(), std::inserter(assigned, assigned.end()));
            } else if (const auto* c = s.as<Call>()) {
                if (const auto* mod = m_.find_module(c->module)) flow(mod->task, assigned, depth + 1);
            }
        }
    }

    void use_before_init()
    {
        for (const auto& md : m_.modes) {
            std::set<int> assigned;
            reads(md.guard, assigned);
            for (const auto& p : md.procedures) flow(p.body, assigned, 0);
            for (const auto& t : md.transitions) {
                reads(t.condition, assigned);
                std::set<int> local = assigned;
                flow(t.action, local, 0);
            }
        }
        for (const auto& mod : m_.modules) {
            std::set<int> assigned;
            flow(mod.task, assigned, 0);
        }
    }

    // -- Module inputs/outputs ----------------------------------------------
    struct IoState {
        std::set<std::string> read_any;
        std::set<std::string> written_any;
    };

    void io_reads(const ModuleDef& mod, const ExprPtr& e, const std::set<int>& written, IoState& st)
    {
        for_each_var(*e, [&](const VarRef& v, const SourceSpan& s) {
            if (v.slot < 0) return;
            st.read_any.insert(v.name);
            bool declared = std::find(mod.inputs.begin(), mod.inputs.end(), v.name) != mod.inputs.end();
            if (!declared && !written.count(v.slot))
                add(DiagCode::UndeclaredInput, Severity::Error, s,
                    "module '" + mod.name + "' reads '" + v.name + "' which is not in its inputs");
        });
    }

    void io_flow(const ModuleDef& mod, const Block& b, std::set<int>& written, IoState& st)
    {
        for (const auto& s : b) {
            if (const auto* a = s.as<Assign>()) {
                io_reads(mod, a->value, written, st);
                if (a->slot < 0) continue;
                st.written_any.insert(a->target);
                if (std::find(mod.outputs.begin(), mod.outputs.end(), a->target) == mod.outputs.end())
                    add(DiagCode::UndeclaredOutput, Severity::Error, s.span,
                        "module '" + mod.name + "' writes '" + a->target + "' which is not in its outputs");
                written.insert(a->slot);
            } else if (const auto* i = s.as<If>()) {
                io_reads(mod, i->cond, written, st);
                std::set<int> t = written, e = written;
                io_flow(mod, i->then_block, t, st);
                io_flow(mod, i->else_block, e, st);
                written.clear();
                std::set_intersection(t.begin(), t.end(), e.begin(), e.end(), std::inserter(written, written.end()));
            }
        }
    }

    void module_io()
    {
        for (const auto& mod : m_.modules) {
            IoState st;
            std::set<int> written;
            io_flow(mod, mod.task, written, st);
            for (const auto& n : mod.inputs)
                if (m_.datadict.find_var(n) && !st.read_any.count(n))
                    add(DiagCode::UnusedDeclaredIO, Severity::Warning, mod.span,
                        "input '" + n + "' of module '" + mod.name + "' is never read");
            for (const auto& n : mod.outputs)
                if (m_.datadict.find_var(n) && !st.written_any.count(n))
                    add(DiagCode::UnusedDeclaredIO, Severity::Warning, mod.span,
                        "output '" + n + "' of module '" + mod.name + "' is never written");
        }
    }

    // -- UncalledModule ------------------------------------------------------
    void uncalled_modules()
    {
        std::set<std::string> reached;
        std::vector<std::string> work;
        auto collect = [&](const Block& b) {
            for_each_stmt(b, [&](const Stmt& s) {
                if (const auto* c = s.as<Call>())
                    if (reached.insert(c->module).second) work.push_back(c->module);
            });
        };
        for (const auto& md : m_.modes) {
            for (const auto& p : md.procedures) collect(p.body);
            for (const auto& t : md.transitions) collect(t.action);
        }
        while (!work.empty()) {
            std::string n = work.back();
            work.pop_back();
            if (const auto* mod = m_.find_module(n)) collect(mod->task);
        }
        for (const auto& mod : m_.modules)
            if (!reached.count(mod.name))
                add(DiagCode::UncalledModule, Severity::Warning, mod.span,
                    "module '" + mod.name + "' is not called from any mode");
    }

    // -- CircularDependency ----------------------------------------------------
    void circular()
    {
        for (const auto& mod : m_.modules) {
            for (const auto& cycle : find_cycles(build_dep_graph(mod, m_.datadict))) {
                if (cycle.size() < 2) continue; // accumulators such as x = x + 1
                std::string path;
                for (const auto& v : cycle) path += v + " -> ";
                path += cycle.front();
                add(DiagCode::CircularDependency, Severity::Warning, mod.span,
                    "circular dependency in module '" + mod.name + "': " + path);
            }
        }
    }

    const Model& m_;
    std::vector<Diagnostic> out_;
    std::set<std::tuple<int, std::string, std::uint32_t, std::uint32_t, std::string>> seen_;
};

class GraphBuilder {
public:
    explicit GraphBuilder(const DataDict& dict) : dict_(dict) {}

    void node(const std::string& name) { names_.insert(name); if (!order_.count(name)) order_[name] = next_++; }

    void walk(const Block& b, const std::vector<std::string>& ctx)
    {
        for (const auto& s : b) {
            if (const auto* a = s.as<Assign>()) {
                node(a->target);
                for_each_var(*a->value, [&](const VarRef& v, const SourceSpan&) {
                    node(v.name);
                    edges_.insert({v.name, a->target});
                });
                for (const auto& c : ctx) edges_.insert({c, a->target});
            } else if (const auto* i = s.as<If>()) {
                std::vector<std::string> inner = ctx;
                for_each_var(*i->cond, [&](const VarRef& v, const SourceSpan&) {
                    node(v.name);
                    if (std::find(inner.begin(), inner.end(), v.name) == inner.end()) inner.push_back(v.name);
                });
                walk(i->then_block, inner);
                walk(i->else_block, inner);
            }
        }
    }

    DepGraph finish() const
    {
        auto rank = [&](const std::string& n) {
            if (auto s = dict_.find_var(n)) return std::make_pair(0, static_cast<std::size_t>(*s));
            return std::make_pair(1, order_.at(n));
        };
        DepGraph g;
        g.nodes.assign(names_.begin(), names_.end());
        std::sort(g.nodes.begin(), g.nodes.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
        g.edges.assign(edges_.begin(), edges_.end());
        std::sort(g.edges.begin(), g.edges.end(), [&](const auto& a, const auto& b) {
            return std::make_pair(rank(a.first), rank(a.second)) < std::make_pair(rank(b.first), rank(b.second));
        });
        return g;
    }

private:
    const DataDict& dict_;
    std::set<std::string> names_;
    std::map<std::string, std::size_t> order_;
    std::size_t next_ = 0;
    std::set<std::pair<std::string, std::string>> edges_;
};

} // namespace

std::vector<Diagnostic> check_model(const Model& model) { return Checker(model).run(); }

DepGraph build_dep_graph(const ModuleDef& module, const DataDict& dict)
{
    GraphBuilder b(dict);
    for (const auto& n : module.inputs) b.node(n);
    for (const auto& n : module.outputs) b.node(n);
    b.walk(module.task, {});
    return b.finish();
}

DepGraph build_model_dep_graph(const Model& model)
{
    GraphBuilder b(model.datadict);
    for (const auto& mod : model.modules) {
        for (const auto& n : mod.inputs) b.node(n);
        for (const auto& n : mod.outputs) b.node(n);
        b.walk(mod.task, {});
    }
    return b.finish();
}

std::vector<std::vector<std::string>> find_cycles(const DepGraph& graph)
{
    // Nodes in lexicographic order; a cycle is found only from its smallest
    // member, walking through strictly larger nodes.
    std::vector<std::string> names = graph.nodes;
    for (const auto& [a, b] : graph.edges) {
        names.push_back(a);
        names.push_back(b);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
    std::vector<std::vector<std::size_t>> adj(names.size());
    for (const auto& [a, b] : graph.edges) adj[index[a]].push_back(index[b]);
    for (auto& succ : adj) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }

    std::vector<std::vector<std::string>> cycles;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(names.size(), false);
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t v) {
        for (std::size_t w : adj[v]) {
            if (w == start) {
                std::vector<std::string> c;
                for (std::size_t p : path) c.push_back(names[p]);
                cycles.push_back(std::move(c));
            } else if (w > start && !on_path[w]) {
                on_path[w] = true;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
                on_path[w] = false;
            }
        }
    };
    for (std::size_t s = 0; s < names.size(); ++s) {
        path = {s};
        on_path[s] = true;
        dfs(s, s);
        on_path[s] = false;
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

std::string format_line(const Diagnostic& d)
{
    return std::string(to_string(d.code)) + " " + d.span.to_string() + " " +
           (d.severity == Severity::Warning ? "warning: " : "") + d.detail;
}

std::string format_report(const std::vector<Diagnostic>& diags)
{
    std::ostringstream os;
    for (const auto& d : diags) os << format_line(d) << '\n';
    return os.str();
}

} // namespace aasrdl
