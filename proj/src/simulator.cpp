#include "aasrdl/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace aasrdl {

std::string TraceStatus::to_string() const
{
    switch (kind) {
    case Kind::Completed: return "Completed";
    case Kind::StoppedBySignal: return "StoppedBySignal";
    case Kind::GuardViolation: return "GuardViolation(" + mode + ", " + std::to_string(cycle) + ")";
    case Kind::RuntimeError:
        return "RuntimeError(" + std::string(aasrdl::to_string(error)) + ", " + location + ", " + std::to_string(cycle) +
               ")";
    case Kind::BoundsViolation: return "BoundsViolation(" + location + ", " + std::to_string(cycle) + ")";
    }
    return "?";
}

std::int64_t base_tick(const Model& model)
{
    std::int64_t g = 0;
    for (const auto& m : model.modes)
        for (const auto& p : m.procedures) g = std::gcd(g, p.period_ms);
    return g > 0 ? g : 1;
}

namespace {

struct BoundsAbort {
    std::string var;
};

class BoundsWatch : public ExecObserver {
public:
    BoundsWatch(const DataDict& d, bool strict, std::int64_t cycle, std::vector<std::string>& warnings)
        : dict_(d), strict_(strict), cycle_(cycle), warnings_(warnings)
    {
    }

    void on_assign(const Stmt& stmt, int slot, const Value& stored) override
    {
        const VarDecl& d = dict_.vars[slot];
        if (d.in_bounds(stored)) return;
        if (strict_) throw BoundsAbort{d.name};
        warnings_.push_back("cycle " + std::to_string(cycle_) + ": " + d.name + " = " + format_value(stored) +
                            " outside its bounds at " + stmt.span.to_string());
    }

private:
    const DataDict& dict_;
    bool strict_;
    std::int64_t cycle_;
    std::vector<std::string>& warnings_;
};

} // namespace

Trace run(const Model& model, const EnvProfile& profile, const RunOptions& opts)
{
    Trace tr;
    for (const auto& v : model.datadict.vars) tr.var_names.push_back(v.name);
    for (const auto& m : model.modes) tr.mode_names.push_back(m.name);
    tr.base_tick = base_tick(model);
    const std::int64_t horizon = opts.horizon >= 0 ? opts.horizon : profile.horizon;
    if (model.modes.empty()) return tr;

    // transitions in ascending priority, declaration order on ties
    std::vector<std::vector<std::size_t>> order(model.modes.size());
    std::vector<std::vector<std::optional<std::size_t>>> targets(model.modes.size());
    for (std::size_t m = 0; m < model.modes.size(); ++m) {
        const auto& ts = model.modes[m].transitions;
        order[m].resize(ts.size());
        std::iota(order[m].begin(), order[m].end(), 0);
        std::stable_sort(order[m].begin(), order[m].end(),
                         [&](std::size_t a, std::size_t b) { return ts[a].priority < ts[b].priority; });
        for (const auto& t : ts) targets[m].push_back(model.mode_index(t.target));
    }

    State st = initial_state(model);
    StimulusSampler sampler(profile, model.datadict);
    std::vector<Value> staged;
    tr.values.reserve(static_cast<std::size_t>(std::min<std::int64_t>(horizon + 1, 1 << 20)) * tr.width());

    for (std::int64_t k = 0; k <= horizon; ++k) {
        st.cycle = k;
        st.time_ms = k * tr.base_tick;
        const Mode& mode = model.modes[st.mode];
        std::size_t next_mode = st.mode;
        BoundsWatch watch(model.datadict, opts.strict, k, tr.warnings);
        try {
            sampler.apply(k, st.values);
            if (mode.guard && !eval_bool(*mode.guard, st.values)) {
                tr.status.kind = TraceStatus::Kind::GuardViolation;
                tr.status.mode = mode.name;
                tr.status.cycle = k;
                return tr;
            }
            for (const auto& p : mode.procedures)
                if (st.time_ms % p.period_ms == 0) execute(model, p.body, st.values, &watch);
            for (std::size_t i : order[st.mode]) {
                const Transition& t = mode.transitions[i];
                if (t.condition && !eval_bool(*t.condition, st.values)) continue;
                staged = st.values;
                // bounds findings of the action count only if it commits
                std::vector<std::string> pending;
                BoundsWatch staged_watch(model.datadict, false, k, pending);
                execute(model, t.action, staged, &staged_watch);
                const Mode& target = model.modes[*targets[st.mode][i]];
                bool ok = !target.guard || eval_bool(*target.guard, staged);
                if (opts.log)
                    tr.log.push_back("cycle " + std::to_string(k) + " " + mode.name + ": " +
                                     std::to_string(t.priority) + "->" + t.target +
                                     (ok ? " committed" : " rolled back (target guard false)"));
                if (!ok) continue;
                if (!pending.empty() && opts.strict) {
                    auto name = pending.front().substr(pending.front().find(": ") + 2);
                    throw BoundsAbort{name.substr(0, name.find(' '))};
                }
                tr.warnings.insert(tr.warnings.end(), pending.begin(), pending.end());
                st.values.swap(staged);
                next_mode = *targets[st.mode][i];
                break;
            }
        } catch (const EvalError& e) {
            tr.status.kind = TraceStatus::Kind::RuntimeError;
            tr.status.error = e.kind();
            tr.status.location = e.span().to_string();
            tr.status.message = e.what();
            tr.status.cycle = k;
            return tr;
        } catch (const BoundsAbort& b) {
            tr.status.kind = TraceStatus::Kind::BoundsViolation;
            tr.status.location = b.var;
            tr.status.cycle = k;
            return tr;
        }

        tr.snapshots.push_back({k, st.time_ms, st.mode});
        tr.values.insert(tr.values.end(), st.values.begin(), st.values.end());

        bool stop = false;
        if (profile.stop) {
            try {
                stop = eval_bool(*profile.stop, st.values);
            } catch (const EvalError& e) {
                tr.status.kind = TraceStatus::Kind::RuntimeError;
                tr.status.error = e.kind();
                tr.status.location = e.span().to_string();
                tr.status.message = e.what();
                tr.status.cycle = k;
                return tr;
            }
        }
        if (stop) {
            tr.status.kind = TraceStatus::Kind::StoppedBySignal;
            tr.status.cycle = k;
            return tr;
        }
        st.mode = next_mode;
    }
    tr.status.kind = TraceStatus::Kind::Completed;
    tr.status.cycle = horizon;
    return tr;
}

std::string export_trace(const Trace& trace)
{
    std::ostringstream os;
    os << "cycle,time_ms,mode";
    for (const auto& n : trace.var_names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace.snapshots[i];
        os << s.cycle << ',' << s.time_ms << ',' << trace.mode_names[s.mode];
        for (const auto& v : trace.at(i)) os << ',' << format_value(v);
        os << '\n';
    }
    for (const auto& w : trace.warnings) os << "# warning: " << w << '\n';
    os << "# status: " << trace.status.to_string() << '\n';
    return os.str();
}

} // namespace aasrdl
