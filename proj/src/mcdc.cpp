#include "aasrdl/mcdc.hpp"

#include "aasrdl/eval.hpp"
#include "aasrdl/printer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace aasrdl {

// ---------------------------------------------------------------------------
// Decision structure

namespace {

bool is_connective(const Expr& e)
{
    if (const auto* b = e.as<Binary>()) return is_logical(b->op);
    if (const auto* u = e.as<Unary>()) return u->op == UnaryOp::Not && contains_logical(*u->operand);
    return false;
}

void collect_conditions(const ExprPtr& e, std::vector<ExprPtr>& out)
{
    if (!is_connective(*e)) {
        out.push_back(e);
        return;
    }
    if (const auto* b = e->as<Binary>()) {
        collect_conditions(b->lhs, out);
        collect_conditions(b->rhs, out);
    } else {
        collect_conditions(e->as<Unary>()->operand, out);
    }
}

bool outcome_rec(const Expr& e, std::uint32_t v, std::size_t& next)
{
    if (!is_connective(e)) return (v >> next++) & 1u;
    if (const auto* b = e.as<Binary>()) {
        // both sides consume their leaves, no short circuit here
        bool l = outcome_rec(*b->lhs, v, next);
        bool r = outcome_rec(*b->rhs, v, next);
        return b->op == BinaryOp::And ? (l && r) : (l || r);
    }
    return !outcome_rec(*e.as<Unary>()->operand, v, next);
}

} // namespace

std::vector<ExprPtr> decompose_conditions(const ExprPtr& decision)
{
    std::vector<ExprPtr> out;
    collect_conditions(decision, out);
    return out;
}

bool decision_outcome(const ExprPtr& decision, std::uint32_t vector)
{
    std::size_t next = 0;
    return outcome_rec(*decision, vector, next);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> mcdc_pairs(const ExprPtr& decision, std::size_t i)
{
    std::size_t k = decompose_conditions(decision).size();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    if (k > 20 || i >= k) return out;
    const std::uint32_t bit = 1u << i, all = (k == 32 ? ~0u : (1u << k) - 1);
    for (std::uint32_t v = all + 1; v-- > 0;) {
        if (!(v & bit)) continue;
        if (decision_outcome(decision, v) != decision_outcome(decision, v & ~bit)) out.emplace_back(v, v & ~bit);
    }
    return out;
}

std::vector<Obligation> mcdc_obligations(const Decision& d)
{
    std::vector<Obligation> out;
    for (std::size_t i = 0; i < d.conditions.size(); ++i) {
        Obligation o;
        o.decision = d.id;
        o.condition = i;
        auto pairs = mcdc_pairs(d.expr, i);
        if (!pairs.empty()) {
            o.pair[0] = pairs.front().first;
            o.pair[1] = pairs.front().second;
        }
        out.push_back(o);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symbolic execution

namespace {

struct Reach {
    std::size_t decision;
    ExprPtr prefix;
    std::vector<ExprPtr> conditions; // in symbolic-input terms
    std::vector<BranchStep> branches;
};

class SymExec {
public:
    SymExec(const Model& m, const std::map<const Stmt*, std::size_t>& decisions,
            const std::vector<Decision>* info, std::size_t limit)
        : model_(m), decisions_(decisions), info_(info), limit_(limit)
    {
    }

    void start(const Block& b)
    {
        State s;
        s.store.assign(model_.datadict.vars.size(), nullptr);
        s.frames.push_back({&b, 0});
        run(std::move(s));
    }

    std::vector<PathInfo> paths;
    std::vector<Reach> reaches;
    bool truncated = false;

private:
    struct Frame {
        const Block* block;
        std::size_t next;
    };
    struct State {
        std::vector<ExprPtr> store;
        std::vector<ExprPtr> prefix;
        std::vector<BranchStep> branches;
        std::vector<Frame> frames;
    };

    void run(State s)
    {
        while (!s.frames.empty()) {
            if (paths.size() >= limit_) {
                truncated = true;
                return;
            }
            Frame& f = s.frames.back();
            if (f.next >= f.block->size()) {
                s.frames.pop_back();
                continue;
            }
            const Stmt& stmt = (*f.block)[f.next++];
            if (const auto* a = stmt.as<Assign>()) {
                if (a->slot >= 0) s.store[a->slot] = substitute(a->value, s.store);
            } else if (const auto* c = stmt.as<Call>()) {
                const ModuleDef* m = model_.find_module(c->module);
                if (m && s.frames.size() < 64) s.frames.push_back({&m->task, 0});
            } else if (const auto* i = stmt.as<If>()) {
                ExprPtr cond = substitute(i->cond, s.store);
                auto d = decisions_.find(&stmt);
                if (d != decisions_.end()) {
                    Reach r{d->second, expr::conj_all(s.prefix), {}, s.branches};
                    for (const auto& c : (*info_)[d->second].conditions) r.conditions.push_back(substitute(c, s.store));
                    r.branches.emplace_back(&stmt, true);
                    reaches.push_back(std::move(r));
                }
                State t = s;
                t.prefix.push_back(cond);
                t.branches.emplace_back(&stmt, true);
                t.frames.push_back({&i->then_block, 0});
                run(std::move(t));
                s.prefix.push_back(expr::negate(cond));
                s.branches.emplace_back(&stmt, false);
                s.frames.push_back({&i->else_block, 0});
            }
        }
        if (paths.size() >= limit_) {
            truncated = true;
            return;
        }
        paths.push_back({expr::conj_all(s.prefix), std::move(s.branches)});
    }

    const Model& model_;
    const std::map<const Stmt*, std::size_t>& decisions_;
    const std::vector<Decision>* info_;
    std::size_t limit_;
};

} // namespace

std::vector<PathInfo> enumerate_paths(const Model& model, const Block& block, std::size_t limit)
{
    std::map<const Stmt*, std::size_t> none;
    SymExec ex(model, none, nullptr, limit);
    ex.start(block);
    return std::move(ex.paths);
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct VectorResult {
    SolveResult::Kind kind = SolveResult::Kind::Unknown;
    std::size_t reach = 0;
    SolveResult sat;
    std::string reason;
};

std::set<int> slots_of(const Expr& e)
{
    std::set<int> s;
    for_each_var(e, [&](const VarRef& v, const SourceSpan&) {
        if (v.slot >= 0) s.insert(v.slot);
    });
    return s;
}

class Generator {
public:
    Generator(const Model& m, const McdcOptions& o, TestSuite& s) : model_(m), opts_(o), suite_(s) {}

    void run(const std::vector<std::string>& declared_inputs)
    {
        const Block& block = *suite_.block;
        std::vector<const Stmt*> ifs;
        for_each_stmt(block, [&](const Stmt& st) {
            if (st.as<If>()) ifs.push_back(&st);
        });
        std::stable_sort(ifs.begin(), ifs.end(), [](const Stmt* a, const Stmt* b) {
            const auto& sa = a->as<If>()->cond->span;
            const auto& sb = b->as<If>()->cond->span;
            return std::make_pair(sa.line, sa.col) < std::make_pair(sb.line, sb.col);
        });
        std::map<const Stmt*, std::size_t> index;
        for (const Stmt* st : ifs) {
            Decision d;
            d.id = suite_.decisions.size();
            d.expr = st->as<If>()->cond;
            d.location = d.expr->span;
            d.conditions = decompose_conditions(d.expr);
            d.stmt = st;
            index[st] = d.id;
            suite_.decisions.push_back(std::move(d));
        }

        SymExec ex(model_, index, &suite_.decisions, opts_.path_limit);
        ex.start(block);
        if (ex.truncated)
            suite_.notes.push_back("path limit of " + std::to_string(opts_.path_limit) +
                                   " reached; decisions on later paths may be reported infeasible");
        reaches_ = std::move(ex.reaches);

        // input columns: declared inputs, then every other symbol in DataDict order
        std::set<int> symbols;
        for (const auto& r : reaches_) {
            auto a = slots_of(*r.prefix);
            symbols.insert(a.begin(), a.end());
            for (const auto& c : r.conditions) {
                auto b = slots_of(*c);
                symbols.insert(b.begin(), b.end());
            }
        }
        for (const auto& n : declared_inputs) {
            if (auto s = model_.datadict.find_var(n)) {
                if (std::find(suite_.input_slots.begin(), suite_.input_slots.end(), *s) != suite_.input_slots.end())
                    continue;
                suite_.input_slots.push_back(*s);
                suite_.input_names.push_back(n);
            }
        }
        for (int s : symbols) {
            if (std::find(suite_.input_slots.begin(), suite_.input_slots.end(), s) != suite_.input_slots.end()) continue;
            suite_.input_slots.push_back(s);
            suite_.input_names.push_back(model_.datadict.vars[s].name);
        }

        for (const auto& d : suite_.decisions) solve_decision(d);
        if (opts_.dedup) dedup();
        for (const auto& t : suite_.tests)
            if (!replay(model_, suite_, t))
                suite_.notes.push_back("replay mismatch for test at " + suite_.decisions[t.decision].location.to_string());
    }

private:
    VectorResult& solve_vector(const Decision& d, std::uint32_t v)
    {
        auto key = std::make_pair(d.id, v);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        VectorResult res;
        res.kind = SolveResult::Kind::Unsat;
        bool unknown = false;
        for (std::size_t r = 0; r < reaches_.size(); ++r) {
            const Reach& reach = reaches_[r];
            if (reach.decision != d.id) continue;
            std::vector<ExprPtr> terms{reach.prefix};
            for (std::size_t i = 0; i < reach.conditions.size(); ++i)
                terms.push_back((v >> i) & 1u ? reach.conditions[i] : expr::negate(reach.conditions[i]));
            auto sr = solve(make_constraint(expr::conj_all(terms), model_.datadict), opts_.solve);
            if (sr.sat()) {
                res.kind = SolveResult::Kind::Sat;
                res.reach = r;
                res.sat = std::move(sr);
                break;
            }
            if (sr.unknown()) {
                unknown = true;
                if (res.reason.empty()) res.reason = sr.reason;
            }
        }
        if (res.kind != SolveResult::Kind::Sat && unknown) res.kind = SolveResult::Kind::Unknown;
        return cache_.emplace(key, std::move(res)).first->second;
    }

    std::size_t test_for(const Decision& d, std::uint32_t v, std::size_t obligation)
    {
        auto key = std::make_pair(d.id, v);
        auto it = test_index_.find(key);
        if (it == test_index_.end()) {
            const VectorResult& vr = cache_.at(key);
            const Reach& reach = reaches_[vr.reach];
            TestCase t;
            t.decision = d.id;
            t.vector = v;
            t.expected = decision_outcome(d.expr, v);
            std::vector<ExprPtr> terms{reach.prefix};
            for (std::size_t i = 0; i < reach.conditions.size(); ++i)
                terms.push_back((v >> i) & 1u ? reach.conditions[i] : expr::negate(reach.conditions[i]));
            t.path_constraint = expr::conj_all(terms);
            t.path = reach.branches;
            for (int s : suite_.input_slots) {
                const auto& name = model_.datadict.vars[s].name;
                auto w = vr.sat.witness.find(name);
                t.inputs.push_back(w != vr.sat.witness.end() ? w->second : model_.datadict.vars[s].initial_value());
            }
            it = test_index_.emplace(key, suite_.tests.size()).first;
            suite_.tests.push_back(std::move(t));
        }
        suite_.tests[it->second].obligations.push_back(obligation);
        return it->second;
    }

    void solve_decision(const Decision& d)
    {
        const std::size_t k = d.conditions.size();
        bool reached = std::any_of(reaches_.begin(), reaches_.end(), [&](const Reach& r) { return r.decision == d.id; });
        for (std::size_t i = 0; i < k; ++i) {
            Obligation o;
            o.decision = d.id;
            o.condition = i;
            const std::size_t oid = suite_.obligations.size();
            if (k > 20) {
                o.status = Obligation::Status::Unknown;
                o.reason = "too many conditions";
                suite_.obligations.push_back(o);
                continue;
            }
            if (!reached) {
                o.status = Obligation::Status::Infeasible;
                o.reason = "decision not reached";
                suite_.obligations.push_back(o);
                continue;
            }
            auto pairs = mcdc_pairs(d.expr, i);
            // prefer pairs whose vectors are already solved, so tests are shared
            auto solved = [&](std::uint32_t v) {
                auto it = cache_.find({d.id, v});
                return it != cache_.end() && it->second.kind == SolveResult::Kind::Sat;
            };
            std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
                return solved(a.first) + solved(a.second) > solved(b.first) + solved(b.second);
            });
            bool unknown = false;
            std::string why;
            for (const auto& [vt, vf] : pairs) {
                auto& rt = solve_vector(d, vt);
                if (rt.kind == SolveResult::Kind::Unsat) continue;
                auto& rf = solve_vector(d, vf);
                if (rt.kind == SolveResult::Kind::Sat && rf.kind == SolveResult::Kind::Sat) {
                    o.status = Obligation::Status::Solved;
                    o.pair[0] = vt;
                    o.pair[1] = vf;
                    break;
                }
                if (rt.kind == SolveResult::Kind::Unknown || rf.kind == SolveResult::Kind::Unknown) {
                    unknown = true;
                    if (why.empty()) why = rt.kind == SolveResult::Kind::Unknown ? rt.reason : rf.reason;
                }
            }
            if (o.status == Obligation::Status::Solved) {
                suite_.obligations.push_back(o);
                suite_.obligations[oid].tests[0] = test_for(d, o.pair[0], oid);
                suite_.obligations[oid].tests[1] = test_for(d, o.pair[1], oid);
                continue;
            }
            if (!pairs.empty()) {
                o.pair[0] = pairs.front().first;
                o.pair[1] = pairs.front().second;
            }
            if (unknown) {
                o.status = Obligation::Status::Unknown;
                o.reason = why;
            } else {
                o.status = Obligation::Status::Infeasible;
                o.reason = pairs.empty() ? "condition cannot affect the outcome" : "no satisfiable pair";
                o.coupled = coupled(d, i);
            }
            suite_.obligations.push_back(o);
        }
    }

    bool coupled(const Decision& d, std::size_t i) const
    {
        for (const auto& r : reaches_) {
            if (r.decision != d.id) continue;
            auto mine = slots_of(*r.conditions[i]);
            for (std::size_t j = 0; j < r.conditions.size(); ++j) {
                if (j == i) continue;
                for (int s : slots_of(*r.conditions[j]))
                    if (mine.count(s)) return true;
            }
        }
        return false;
    }

    void dedup()
    {
        std::vector<TestCase> kept;
        std::vector<std::size_t> remap(suite_.tests.size());
        for (std::size_t t = 0; t < suite_.tests.size(); ++t) {
            auto& tc = suite_.tests[t];
            auto same = std::find_if(kept.begin(), kept.end(), [&](const TestCase& k) {
                return std::equal(k.inputs.begin(), k.inputs.end(), tc.inputs.begin(), tc.inputs.end(),
                                  [](const Value& a, const Value& b) { return a.identical(b); });
            });
            if (same == kept.end()) {
                remap[t] = kept.size();
                kept.push_back(tc);
            } else {
                remap[t] = static_cast<std::size_t>(same - kept.begin());
                same->merged.push_back(t);
                same->obligations.insert(same->obligations.end(), tc.obligations.begin(), tc.obligations.end());
            }
        }
        merged_from_ = suite_.tests;
        suite_.tests = std::move(kept);
        for (auto& o : suite_.obligations)
            if (o.status == Obligation::Status::Solved)
                for (auto& t : o.tests) t = remap[t];
    }

    const Model& model_;
    const McdcOptions& opts_;
    TestSuite& suite_;
    std::vector<Reach> reaches_;
    std::map<std::pair<std::size_t, std::uint32_t>, VectorResult> cache_;
    std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> test_index_;
    std::vector<TestCase> merged_from_;
};

} // namespace

TestSuite generate_tests(const Model& model, std::string_view module, const McdcOptions& opts)
{
    const ModuleDef* m = model.find_module(module);
    if (!m) throw std::invalid_argument("unknown module '" + std::string(module) + "'");
    TestSuite suite;
    suite.unit = m->name;
    suite.block = std::shared_ptr<const Block>(std::shared_ptr<const Block>(), &m->task);
    Generator(model, opts, suite).run(m->inputs);
    return suite;
}

TestSuite generate_mode_tests(const Model& model, std::string_view mode, const McdcOptions& opts)
{
    const Mode* md = model.find_mode(mode);
    if (!md) throw std::invalid_argument("unknown mode '" + std::string(mode) + "'");
    // guard { procedures; if (t1) a1 else if (t2) a2 ... }
    std::vector<const Transition*> ts;
    for (const auto& t : md->transitions) ts.push_back(&t);
    std::stable_sort(ts.begin(), ts.end(), [](const Transition* a, const Transition* b) { return a->priority < b->priority; });
    Block chain;
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        If i{(*it)->condition ? (*it)->condition : expr::boolean(true, (*it)->span), (*it)->action, std::move(chain)};
        chain = Block{};
        chain.push_back(Stmt{std::move(i), (*it)->span});
    }
    Block body;
    for (const auto& p : md->procedures) body.insert(body.end(), p.body.begin(), p.body.end());
    body.insert(body.end(), chain.begin(), chain.end());
    auto block = std::make_shared<Block>();
    if (md->guard)
        block->push_back(Stmt{If{md->guard, std::move(body), {}}, md->span});
    else
        *block = std::move(body);

    TestSuite suite;
    suite.unit = "mode_" + md->name;
    suite.block = block;
    Generator(model, opts, suite).run({});
    return suite;
}

std::vector<TestSuite> generate_all(const Model& model, const McdcOptions& opts)
{
    std::vector<TestSuite> out;
    for (const auto& m : model.modules) out.push_back(generate_tests(model, m.name, opts));
    if (opts.scope == McdcScope::Modes)
        for (const auto& m : model.modes) out.push_back(generate_mode_tests(model, m.name, opts));
    return out;
}

// ---------------------------------------------------------------------------
// Replay and reporting

namespace {

class ReplayObserver : public ExecObserver {
public:
    ReplayObserver(const TestCase& t, const Decision& d, const std::vector<Value>& values)
        : test_(t), decision_(d), values_(values)
    {
    }

    void on_branch(const Stmt& stmt, bool taken) override
    {
        if (done_) return;
        std::size_t n = seen_.size();
        if (n >= test_.path.size() || test_.path[n].first != &stmt) {
            ok_ = false;
            done_ = true;
            return;
        }
        seen_.emplace_back(&stmt, taken);
        if (n + 1 < test_.path.size()) {
            if (taken != test_.path[n].second) {
                ok_ = false;
                done_ = true;
            }
            return;
        }
        // at the decision: compare condition vector and outcome
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < decision_.conditions.size(); ++i) {
            bool c = false;
            try {
                c = eval_bool(*decision_.conditions[i], values_);
            } catch (const EvalError&) {
                ok_ = false;
            }
            if (c) v |= 1u << i;
        }
        ok_ = ok_ && v == test_.vector && taken == test_.expected;
        reached_ = true;
        done_ = true;
    }

    [[nodiscard]] bool ok() const { return ok_ && reached_; }

private:
    const TestCase& test_;
    const Decision& decision_;
    const std::vector<Value>& values_;
    std::vector<BranchStep> seen_;
    bool ok_ = true;
    bool reached_ = false;
    bool done_ = false;
};

} // namespace

bool replay(const Model& model, const TestSuite& suite, const TestCase& test)
{
    std::vector<Value> values;
    for (const auto& v : model.datadict.vars) values.push_back(v.initial_value());
    for (std::size_t i = 0; i < suite.input_slots.size(); ++i) values[suite.input_slots[i]] = test.inputs[i];
    ReplayObserver obs(test, suite.decisions[test.decision], values);
    try {
        execute(model, *suite.block, values, &obs);
    } catch (const EvalError&) {
        // errors after the decision do not matter
    }
    return obs.ok();
}

std::string export_tests(const TestSuite& suite)
{
    std::ostringstream os;
    for (const auto& n : suite.input_names) os << n << ',';
    os << "expected_decision,decision_location\n";
    for (const auto& t : suite.tests) {
        for (const auto& v : t.inputs) os << format_value(v) << ',';
        std::string expected = t.expected ? "true" : "false";
        std::string loc = suite.decisions[t.decision].location.to_string();
        if (!t.merged.empty()) {
            // folded rows list every decision they exercise
            std::set<std::size_t> seen{t.decision};
            for (std::size_t o : t.obligations) {
                const auto& ob = suite.obligations[o];
                if (!seen.insert(ob.decision).second) continue;
                bool side = ob.tests[0] == static_cast<std::size_t>(&t - suite.tests.data()) ? true : false;
                std::uint32_t vec = side ? ob.pair[0] : ob.pair[1];
                expected += std::string(";") + (decision_outcome(suite.decisions[ob.decision].expr, vec) ? "true" : "false");
                loc += ";" + suite.decisions[ob.decision].location.to_string();
            }
        }
        os << expected << ',' << loc << '\n';
    }
    return os.str();
}

double coverage_percent(const TestSuite& suite, bool count_infeasible)
{
    std::size_t solved = 0, denom = 0;
    for (const auto& o : suite.obligations) {
        if (o.status == Obligation::Status::Solved) ++solved, ++denom;
        if (o.status == Obligation::Status::Unknown) ++denom;
        if (o.status == Obligation::Status::Infeasible && count_infeasible) ++denom;
    }
    return denom == 0 ? 100.0 : 100.0 * static_cast<double>(solved) / static_cast<double>(denom);
}

std::string coverage_report(const TestSuite& suite, bool count_infeasible)
{
    std::ostringstream os;
    char pct[32];
    os << "unit " << suite.unit << ": " << suite.decisions.size() << " decision(s), " << suite.tests.size()
       << " test(s)\n";
    for (const auto& d : suite.decisions) {
        std::size_t n = 0, solved = 0, infeasible = 0, unknown = 0;
        TestSuite one;
        for (const auto& o : suite.obligations) {
            if (o.decision != d.id) continue;
            ++n;
            solved += o.status == Obligation::Status::Solved;
            infeasible += o.status == Obligation::Status::Infeasible;
            unknown += o.status == Obligation::Status::Unknown;
            one.obligations.push_back(o);
        }
        std::snprintf(pct, sizeof pct, "%.1f%%", coverage_percent(one, count_infeasible));
        os << "  decision " << d.location.to_string() << "  " << to_string(*d.expr) << '\n'
           << "    obligations " << n << ", solved " << solved << ", infeasible " << infeasible << ", unknown "
           << unknown << ", coverage " << pct << '\n';
        for (const auto& o : suite.obligations) {
            if (o.decision != d.id || o.status == Obligation::Status::Solved) continue;
            os << "    condition " << o.condition << " (" << to_string(*d.conditions[o.condition]) << "): "
               << (o.status == Obligation::Status::Infeasible ? "infeasible" : "unknown");
            if (o.coupled) os << ", coupled";
            if (!o.reason.empty()) os << " [" << o.reason << ']';
            os << '\n';
        }
    }
    std::snprintf(pct, sizeof pct, "%.1f%%", coverage_percent(suite, count_infeasible));
    os << "  total coverage " << pct << (count_infeasible ? " (infeasible counted)" : " (infeasible excluded)") << '\n';
    for (const auto& n : suite.notes) os << "  note: " << n << '\n';
    return os.str();
}

} // namespace aasrdl
