#include "aasrdl/diagrams.hpp"
#include "aasrdl/estimate.hpp"
#include "aasrdl/mcdc.hpp"
#include "aasrdl/mode_analysis.hpp"
#include "aasrdl/parser.hpp"
#include "aasrdl/profile.hpp"
#include "aasrdl/simulator.hpp"
#include "aasrdl/static_analysis.hpp"
#include "aasrdl/typecheck.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace aasrdl;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    std::string model_path;
    std::string out = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool strict = false;
    bool verbose = false;
    unsigned jobs = 1;
    std::string external_solver;
    bool emit_smt = false;

    [[nodiscard]] SolveOptions solve() const
    {
        SolveOptions o;
        o.seed = seed;
        o.external_solver = external_solver;
        return o;
    }
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Usage("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Usage("cannot write '" + path.string() + "'");
    out << text;
}

fs::path out_dir(const Global& g)
{
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) throw Usage("cannot create output directory '" + g.out + "': " + ec.message());
    return fs::path(g.out);
}

// parse -> type_check -> check_model, with every finding rendered one per line
struct Loaded {
    std::optional<Model> model;
    std::string report;
    std::size_t errors = 0;
    std::size_t warnings = 0;
};

Loaded load(const std::string& path)
{
    Loaded l;
    auto parsed = parse_model(read_file(path), path);
    std::ostringstream os;
    for (const auto& d : parsed.diagnostics) {
        os << d.to_string() << '\n';
        (d.severity == Severity::Error ? l.errors : l.warnings)++;
    }
    if (!parsed.ok()) {
        l.report = os.str();
        return l;
    }
    auto types = type_check(*parsed.value);
    for (const auto& d : types.diagnostics) {
        os << "TypeMismatch " << d.span.to_string() << ' ' << d.message << '\n';
        ++l.errors;
    }
    auto diags = check_model(*parsed.value);
    for (const auto& d : diags) (d.severity == Severity::Error ? l.errors : l.warnings)++;
    os << format_report(diags);
    l.report = os.str();
    l.model = std::move(parsed.value);
    return l;
}

const Model& require_valid(const Loaded& l)
{
    if (!l.model || l.errors > 0) {
        std::cerr << l.report;
        throw std::runtime_error("model has errors; run 'validate' for the full report");
    }
    return *l.model;
}

std::vector<std::int64_t> parse_horizons(const std::string& s)
{
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Usage("bad horizon '" + item + "'");
        }
    }
    if (out.empty()) throw Usage("--horizons needs at least one value");
    if (!std::is_sorted(out.begin(), out.end())) throw Usage("--horizons must be ascending");
    return out;
}

EnvProfile load_env(const Global& g, const Model& m, const std::string& path)
{
    EnvProfile p = default_profile(m.datadict);
    if (!path.empty()) {
        auto errs = load_profile(read_file(path), m.datadict, p);
        if (!errs.empty()) {
            std::string msg = "invalid profile '" + path + "':";
            for (const auto& e : errs) msg += "\n  " + e;
            throw Usage(msg);
        }
    }
    if (g.seed_given || path.empty()) p.seed = g.seed;
    return p;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Global& g)
{
    Loaded l = load(g.model_path);
    std::ostringstream os;
    os << l.report << l.errors << " error(s), " << l.warnings << " warning(s)\n";
    std::cout << os.str();
    write_file(out_dir(g) / "validate.txt", os.str());
    return l.errors == 0 && l.model ? kOk : kFindings;
}

int cmd_diagram(const Global& g)
{
    Loaded l = load(g.model_path);
    const Model& m = require_valid(l);
    fs::path dir = out_dir(g);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const DotGraph& graph) {
        write_file(dir / name, graph.to_dot());
        written.push_back(name);
    };
    emit(m.name + ".modes.dot", mode_transition_diagram(m));
    for (const auto& mode : m.modes) emit(m.name + "." + mode.name + ".modules.dot", module_relation_diagram(m, mode.name));
    for (const auto& mod : m.modules) emit(m.name + "." + mod.name + ".vars.dot", variable_dependency_diagram(mod, m.datadict));
    for (const auto& w : written) std::cout << (dir / w).string() << '\n';
    return kOk;
}

int cmd_checkmodes(const Global& g)
{
    Loaded l = load(g.model_path);
    const Model& m = require_valid(l);
    fs::path dir = out_dir(g);
    auto excl = check_exclusiveness(m, g.solve());
    auto reach = check_reachability(m, g.solve());
    std::string text = excl.to_text() + reach.to_text();
    std::cout << text;
    write_file(dir / (m.name + ".modes.txt"), text);
    write_file(dir / (m.name + ".exclusiveness.csv"), excl.to_csv());
    if (g.emit_smt) {
        fs::path smt = dir / "smt";
        fs::create_directories(smt);
        for (const auto& mode : m.modes)
            for (std::size_t i = 0; i < mode.transitions.size(); ++i)
                for (std::size_t j = i + 1; j < mode.transitions.size(); ++j) {
                    const auto& a = mode.transitions[i];
                    const auto& b = mode.transitions[j];
                    if (!a.condition || !b.condition) continue;
                    auto c = make_constraint(expr::conj_all({a.condition, b.condition}), m.datadict);
                    write_file(smt / (sanitize_id(mode.name) + "_p" + std::to_string(a.priority) + "_p" +
                                      std::to_string(b.priority) + ".smt2"),
                               emit_smtlib(c));
                }
    }
    return excl.ok() && reach.ok() ? kOk : kFindings;
}

int cmd_simulate(const Global& g, const std::string& profile_path, std::int64_t horizon)
{
    Loaded l = load(g.model_path);
    const Model& m = require_valid(l);
    EnvProfile p = load_env(g, m, profile_path);
    RunOptions ro;
    ro.strict = g.strict;
    ro.log = g.verbose;
    ro.horizon = horizon;
    Trace t = run(m, p, ro);
    fs::path dir = out_dir(g);
    write_file(dir / "trace.csv", export_trace(t));
    if (g.verbose) {
        std::string log;
        for (const auto& line : t.log) log += line + '\n';
        write_file(dir / "trace.log", log);
    }
    std::cout << t.size() << " snapshot(s), status " << t.status.to_string() << '\n';
    for (const auto& w : t.warnings) std::cout << "warning: " << w << '\n';
    return t.status.aborted() ? kFindings : kOk;
}

struct EstimateArgs {
    std::string property;
    std::string profile;
    double delta = 0.01;
    double sigma = 0.05;
    std::string horizons;
    double timeout = 0;
    std::uint64_t samples = 0;
};

int cmd_estimate(const Global& g, const EstimateArgs& a)
{
    Loaded l = load(g.model_path);
    const Model& m = require_valid(l);
    EnvProfile p = load_env(g, m, a.profile);

    std::vector<LtlFormula> formulas;
    std::vector<std::string> names, texts;
    std::istringstream props(read_file(a.property));
    std::string line;
    int lineno = 0;
    bool bad = false;
    while (std::getline(props, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto r = parse_ltl(line, m.datadict, a.property + ":" + std::to_string(lineno));
        for (const auto& d : r.diagnostics) std::cerr << d.to_string() << '\n';
        if (!r.ok()) {
            bad = true;
            continue;
        }
        formulas.push_back(std::move(*r.value));
        names.push_back("P" + std::to_string(formulas.size()));
        texts.push_back(line.substr(line.find_first_not_of(" \t")));
    }
    if (bad) return kFindings;
    if (formulas.empty()) throw Usage("no properties in '" + a.property + "'");

    EstimationConfig cfg;
    cfg.delta = a.delta;
    cfg.sigma = a.sigma;
    cfg.horizons = a.horizons.empty() ? std::vector<std::int64_t>{p.horizon} : parse_horizons(a.horizons);
    cfg.seed = p.seed;
    cfg.jobs = g.jobs;
    cfg.timeout_s = a.timeout;
    if (a.samples > 0) cfg.samples = a.samples;
    try {
        (void)sample_count(cfg.delta, cfg.sigma);
    } catch (const std::invalid_argument& e) {
        throw Usage(e.what());
    }

    auto results = estimate_all(m, p, formulas, cfg);
    std::ostringstream os;
    for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ": " << texts[i] << '\n';
    os << format_estimates(names, results);
    std::cout << os.str();
    fs::path dir = out_dir(g);
    write_file(dir / "estimate.txt", os.str());
    write_file(dir / "estimate.csv", estimates_csv(names, results));
    return kOk;
}

struct GentestArgs {
    std::string module;
    bool all = false;
    std::string scope = "tasks";
    bool dedup = false;
    bool count_infeasible = false;
};

int cmd_gentests(const Global& g, const GentestArgs& a)
{
    if (a.module.empty() == !a.all) throw Usage("gentests needs exactly one of --module <name> or --all");
    Loaded l = load(g.model_path);
    const Model& m = require_valid(l);
    McdcOptions o;
    o.scope = a.scope == "modes" ? McdcScope::Modes : McdcScope::Tasks;
    o.dedup = a.dedup;
    o.count_infeasible = a.count_infeasible;
    o.solve = g.solve();

    std::vector<TestSuite> suites;
    if (a.all) {
        suites = generate_all(m, o);
    } else {
        if (!m.find_module(a.module)) throw Usage("unknown module '" + a.module + "'");
        suites.push_back(generate_tests(m, a.module, o));
        if (o.scope == McdcScope::Modes)
            for (const auto& mode : m.modes) suites.push_back(generate_mode_tests(m, mode.name, o));
    }
    fs::path dir = out_dir(g);
    std::string report;
    std::size_t total = 0;
    for (const auto& s : suites) {
        write_file(dir / (s.unit + ".tests.csv"), export_tests(s));
        report += coverage_report(s, a.count_infeasible);
        total += s.tests.size();
    }
    write_file(dir / "coverage.txt", report);
    std::cout << report << total << " test case(s) in " << suites.size() << " unit(s)\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Requirement model toolchain: validation, diagrams, mode analysis, simulation, "
                 "statistical estimation and MC/DC test generation"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    if (const char* env = std::getenv("AASRDL_EXTERNAL_SOLVER")) g.external_solver = env;
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    auto* seed = app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_flag("--strict", g.strict, "abort simulation on bounds violations");
    app.add_flag("--verbose", g.verbose, "write per-cycle transition log");
    app.add_option("--jobs", g.jobs, "parallel simulation runs")->check(CLI::Range(1u, 1024u));
    app.add_option("--external-solver", g.external_solver, "shell command reading SMT-LIB on stdin");
    app.add_flag("--emit-smt", g.emit_smt, "write SMT-LIB scripts of solver queries");

    auto model_arg = [&](CLI::App* sub) { sub->add_option("model", g.model_path, "model file (.arl)")->required(); };

    auto* validate = app.add_subcommand("validate", "parse, type-check and run well-formedness checks");
    model_arg(validate);
    auto* diagram = app.add_subcommand("diagram", "write mode, module and variable diagrams as DOT");
    model_arg(diagram);
    auto* checkmodes = app.add_subcommand("checkmodes", "transition exclusiveness and mode reachability");
    model_arg(checkmodes);

    auto* simulate = app.add_subcommand("simulate", "run the model and write trace.csv");
    std::string profile;
    std::int64_t horizon = -1;
    simulate->add_option("--profile", profile, "environment profile (JSON)");
    simulate->add_option("--horizon", horizon, "last cycle to simulate")->check(CLI::NonNegativeNumber);
    model_arg(simulate);

    auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of property satisfaction");
    EstimateArgs ea;
    est->add_option("--property", ea.property, "property file, one LTL formula per line")->required();
    est->add_option("--profile", ea.profile, "environment profile (JSON)");
    est->add_option("--delta", ea.delta, "interval half-width")->capture_default_str();
    est->add_option("--sigma", ea.sigma, "confidence error")->capture_default_str();
    est->add_option("--horizons", ea.horizons, "ascending cycle counts, comma separated");
    est->add_option("--timeout", ea.timeout, "wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
    est->add_option("--samples", ea.samples, "override the computed run count");
    model_arg(est);

    auto* gen = app.add_subcommand("gentests", "MC/DC test generation");
    GentestArgs ga;
    gen->add_option("--module", ga.module, "module to cover");
    gen->add_flag("--all", ga.all, "cover every module");
    gen->add_option("--scope", ga.scope, "tasks or modes")->check(CLI::IsMember({"tasks", "modes"}));
    gen->add_flag("--dedup", ga.dedup, "emit identical valuations once");
    gen->add_flag("--count-infeasible", ga.count_infeasible, "keep infeasible obligations in the percentage");
    model_arg(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    g.seed_given = seed->count() > 0;

    try {
        if (*validate) return cmd_validate(g);
        if (*diagram) return cmd_diagram(g);
        if (*checkmodes) return cmd_checkmodes(g);
        if (*simulate) return cmd_simulate(g, profile, horizon);
        if (*est) return cmd_estimate(g, ea);
        if (*gen) return cmd_gentests(g, ga);
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFindings;
    }
    return kUsage;
}
