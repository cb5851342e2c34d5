#pragma once

#include "aasrdl/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace aasrdl {

/// Typed variable with an inclusive domain. Absent bounds mean the full
/// range of the type (largest finite value for floats).
struct VarDomain {
    std::string name;
    Type type = Type::Int32;
    std::optional<Value> min;
    std::optional<Value> max;
};

/// A boolean formula whose VarRef slots index `vars`.
struct Constraint {
    ExprPtr formula;
    std::vector<VarDomain> vars;
};

/// Domains taken from the DataDict's declared bounds; slots line up with
/// DataDict indices so model expressions can be used unchanged.
[[nodiscard]] Constraint make_constraint(ExprPtr formula, const DataDict& dict);

using Witness = std::map<std::string, Value>;

struct SolveResult {
    enum class Kind : std::uint8_t { Sat, Unsat, Unknown };

    Kind kind = Kind::Unknown;
    /// Values of the variables the formula mentions (Sat only).
    Witness witness;
    /// One value per Constraint::vars slot (Sat only); unmentioned variables
    /// hold the in-domain value nearest zero.
    std::vector<Value> values;
    std::string reason; ///< Unknown only

    [[nodiscard]] bool sat() const { return kind == Kind::Sat; }
    [[nodiscard]] bool unsat() const { return kind == Kind::Unsat; }
    [[nodiscard]] bool unknown() const { return kind == Kind::Unknown; }
};

[[nodiscard]] std::string_view to_string(SolveResult::Kind k);

struct SolveOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 10'000;     ///< budget for nonlinear cubes
    std::size_t branch_nodes = 4'000; ///< integer branch-and-bound budget
    std::size_t cubes = 100'000;      ///< disjunct budget
    /// When set, the SMT-LIB script is piped to this shell command instead of
    /// using the internal procedure.
    std::string external_solver;
};

/// Decides the constraint. A Sat result always carries a witness that makes
/// eval_expr return true. Complete for linear atoms; nonlinear atoms (sqrt,
/// abs, %, int division, products of variables) are sampled.
[[nodiscard]] SolveResult solve(const Constraint& c, const SolveOptions& opts = {});

/// SMT-LIB v2 script: int32 as Int and floats as Real, each with its range
/// asserted; ends with (check-sat) and (get-model).
[[nodiscard]] std::string emit_smtlib(const Constraint& c);

/// Pipes `emit_smtlib(c)` into `command` and reads back the judgment and
/// model. A model that fails direct evaluation is reported as Unknown.
[[nodiscard]] SolveResult solve_external(const Constraint& c, const std::string& command);

/// Reads a solver's stdout. Exposed for tests.
[[nodiscard]] SolveResult parse_solver_output(const Constraint& c, const std::string& output);

} // namespace aasrdl
