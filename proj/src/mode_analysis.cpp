#include "aasrdl/mode_analysis.hpp"

#include "aasrdl/eval.hpp"
#include "aasrdl/printer.hpp"

#include <deque>
#include <sstream>

namespace aasrdl {

std::string TransitionRef::label() const { return std::to_string(priority) + "->" + target; }

std::string format_witness(const Witness& w)
{
    std::string out;
    for (const auto& [k, v] : w) {
        if (!out.empty()) out += ';';
        out += k + "=" + format_value(v);
    }
    return out;
}

namespace {

TransitionRef ref(const Mode& m, std::size_t i)
{
    return {m.name, i, m.transitions[i].priority, m.transitions[i].target};
}

ExprPtr condition(const Transition& t) { return t.condition ? t.condition : expr::boolean(true); }

} // namespace

ExclusivenessReport check_exclusiveness(const Model& model, const SolveOptions& opts)
{
    ExclusivenessReport rep;
    for (const auto& m : model.modes) {
        for (std::size_t i = 0; i < m.transitions.size(); ++i) {
            for (std::size_t j = i + 1; j < m.transitions.size(); ++j) {
                ++rep.pairs_checked;
                auto c = make_constraint(expr::conj(condition(m.transitions[i]), condition(m.transitions[j])),
                                         model.datadict);
                auto r = solve(c, opts);
                if (r.sat())
                    rep.violations.push_back({ref(m, i), ref(m, j), r.witness});
                else if (r.unknown())
                    rep.unknowns.push_back({ref(m, i), ref(m, j), r.reason});
            }
        }
    }
    return rep;
}

std::string ExclusivenessReport::to_text() const
{
    std::ostringstream os;
    os << "exclusiveness: " << pairs_checked << " pair(s) checked, " << violations.size() << " violation(s), "
       << unknowns.size() << " undecided\n";
    for (const auto& v : violations)
        os << "  VIOLATION mode " << v.a.mode << ": transitions " << v.a.label() << " and " << v.b.label()
           << " can both fire, e.g. " << format_witness(v.witness) << '\n';
    for (const auto& u : unknowns)
        os << "  WARNING mode " << u.a.mode << ": transitions " << u.a.label() << " and " << u.b.label()
           << " undecided (" << u.reason << ")\n";
    return os.str();
}

std::string ExclusivenessReport::to_csv() const
{
    std::ostringstream os;
    os << "mode,transition_a,transition_b,witness\n";
    for (const auto& v : violations)
        os << v.a.mode << ',' << v.a.label() << ',' << v.b.label() << ',' << format_witness(v.witness) << '\n';
    return os.str();
}

ReachabilityReport check_reachability(const Model& model, const SolveOptions& opts)
{
    ReachabilityReport rep;
    if (model.modes.empty()) return rep;
    const std::size_t n = model.modes.size();
    std::vector<int> guard_ok(n, -1); // -1 unknown yet, 0 unsat, 1 possible
    auto guard_possible = [&](std::size_t m) {
        if (guard_ok[m] < 0) {
            const auto& g = model.modes[m].guard;
            guard_ok[m] = !g || !solve(make_constraint(g, model.datadict), opts).unsat();
        }
        return guard_ok[m] == 1;
    };

    std::size_t init = model.initial_mode_index();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<TransitionRef>> path(n);
    std::deque<std::size_t> queue{init};
    seen[init] = true;
    while (!queue.empty()) {
        std::size_t m = queue.front();
        queue.pop_front();
        const Mode& mode = model.modes[m];
        for (std::size_t i = 0; i < mode.transitions.size(); ++i) {
            auto to = model.mode_index(mode.transitions[i].target);
            if (!to || seen[*to]) continue;
            auto r = solve(make_constraint(condition(mode.transitions[i]), model.datadict), opts);
            if (r.unsat()) continue;
            if (r.unknown()) rep.unknowns.emplace_back(ref(mode, i), r.reason);
            if (!guard_possible(*to)) continue;
            seen[*to] = true;
            path[*to] = path[m];
            path[*to].push_back(ref(mode, i));
            queue.push_back(*to);
        }
    }
    for (std::size_t m = 0; m < n; ++m) {
        const auto& name = model.modes[m].name;
        if (seen[m]) {
            rep.reachable.push_back(name);
            rep.paths[name] = path[m];
        } else {
            rep.unreachable.push_back(name);
        }
    }
    return rep;
}

std::string ReachabilityReport::to_text() const
{
    std::ostringstream os;
    os << "reachability: " << reachable.size() << " reachable, " << unreachable.size() << " unreachable\n";
    for (const auto& m : reachable) {
        os << "  reachable " << m << ':';
        const auto& p = paths.at(m);
        if (p.empty()) os << " (initial)";
        for (const auto& t : p) os << ' ' << t.mode << " --" << t.priority << "--> " << t.target;
        os << '\n';
    }
    for (const auto& m : unreachable) os << "  UNREACHABLE " << m << '\n';
    for (const auto& [t, why] : unknowns)
        os << "  WARNING transition " << t.mode << ' ' << t.label() << " assumed satisfiable (" << why << ")\n";
    return os.str();
}

} // namespace aasrdl
