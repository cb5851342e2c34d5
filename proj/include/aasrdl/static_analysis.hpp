#pragma once

#include "aasrdl/model.hpp"
#include "aasrdl/parser.hpp"

#include <string>
#include <utility>
#include <vector>

namespace aasrdl {

enum class DiagCode : std::uint8_t {
    UndefinedVariable,
    UseBeforeInit,
    UndeclaredInput,
    UndeclaredOutput,
    UnusedDeclaredIO,
    DuplicateName,
    UncalledModule,
    CircularDependency,
};

[[nodiscard]] std::string_view to_string(DiagCode c);

struct Diagnostic {
    DiagCode code;
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string detail;
};

/// Well-formedness checks over a parsed model. Results are sorted by
/// (file, line, code) and free of duplicates.
[[nodiscard]] std::vector<Diagnostic> check_model(const Model& model);

/// Variable dependency graph. An edge (from, to) means the value computed
/// for `to` reads `from`.
struct DepGraph {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;

    [[nodiscard]] bool has_edge(std::string_view from, std::string_view to) const;
};

/// Single pass over the task: `y = f(x1..xk)` adds xi -> y, and a branch
/// adds an edge from each condition variable to every variable assigned in
/// either arm. Nodes follow DataDict declaration order; names missing from
/// the DataDict come last in first-appearance order.
[[nodiscard]] DepGraph build_dep_graph(const ModuleDef& module, const DataDict& dict);

/// Union of every module's graph.
[[nodiscard]] DepGraph build_model_dep_graph(const Model& model);

/// All elementary cycles, each rotated to start at its lexicographically
/// smallest variable, sorted. Self-loops are cycles of length one.
[[nodiscard]] std::vector<std::vector<std::string>> find_cycles(const DepGraph& graph);

/// "CODE file:line:col message" lines, one per diagnostic.
[[nodiscard]] std::string format_report(const std::vector<Diagnostic>& diags);
[[nodiscard]] std::string format_line(const Diagnostic& d);

} // namespace aasrdl
