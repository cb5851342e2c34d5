#pragma once

#include "aasrdl/solver.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace aasrdl {

/// One executed branch: the `if` statement and the arm taken.
using BranchStep = std::pair<const Stmt*, bool>;

struct PathInfo {
    ExprPtr constraint; ///< conjunction of branch conditions over initial values
    std::vector<BranchStep> branches;
};

/// Symbolic execution of a loop-free block. Assignments update a
/// substitution store, `call` is inlined, and every `if` forks. Stops after
/// `limit` paths.
[[nodiscard]] std::vector<PathInfo> enumerate_paths(const Model& model, const Block& block, std::size_t limit = 4096);

/// Maximal subexpressions of `decision` without && or ||, left to right.
[[nodiscard]] std::vector<ExprPtr> decompose_conditions(const ExprPtr& decision);

/// Outcome of the decision for a truth vector (bit i = condition i).
[[nodiscard]] bool decision_outcome(const ExprPtr& decision, std::uint32_t vector);

struct Decision {
    std::size_t id = 0;
    SourceSpan location;
    ExprPtr expr;
    std::vector<ExprPtr> conditions;
    const Stmt* stmt = nullptr;
};

struct Obligation {
    enum class Status : std::uint8_t { Open, Solved, Infeasible, Unknown };

    std::size_t decision = 0;
    std::size_t condition = 0;
    Status status = Status::Open;
    /// Condition vectors: [0] has the condition true, [1] has it false.
    std::uint32_t pair[2] = {0, 0};
    std::size_t tests[2] = {0, 0}; ///< indices into TestSuite::tests when Solved
    bool coupled = false;          ///< Infeasible and sharing a variable with another condition
    std::string reason;
};

/// Unique-cause obligations, one per condition, each seeded with its first
/// candidate pair (vectors differing only at that condition and flipping
/// the outcome).
[[nodiscard]] std::vector<Obligation> mcdc_obligations(const Decision& d);

/// All candidate pairs for condition `i`, true side first.
[[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>> mcdc_pairs(const ExprPtr& decision, std::size_t i);

struct TestCase {
    std::size_t decision = 0;
    std::uint32_t vector = 0;
    bool expected = false;
    std::vector<Value> inputs; ///< aligned with TestSuite::input_names
    ExprPtr path_constraint;
    std::vector<BranchStep> path; ///< branches up to and including the decision
    std::vector<std::size_t> obligations;
    std::vector<std::size_t> merged; ///< other tests folded into this one by dedup
};

struct TestSuite {
    std::string unit; ///< module name, or "mode_<name>"
    std::shared_ptr<const Block> block;
    std::vector<std::string> input_names;
    std::vector<int> input_slots;
    std::vector<Decision> decisions;
    std::vector<Obligation> obligations;
    std::vector<TestCase> tests;
    std::vector<std::string> notes;
};

enum class McdcScope : std::uint8_t { Tasks, Modes };

struct McdcOptions {
    McdcScope scope = McdcScope::Tasks;
    bool dedup = false;            ///< fold tests with identical inputs
    bool count_infeasible = false; ///< keep Infeasible obligations in the coverage denominator
    std::size_t path_limit = 4096;
    SolveOptions solve;
};

/// Tests for every decision in one module's task. Throws
/// std::invalid_argument for an unknown module.
[[nodiscard]] TestSuite generate_tests(const Model& model, std::string_view module, const McdcOptions& opts = {});

/// Tests for a mode's guard, transition conditions, and the branches of its
/// procedures and actions, as one cycle with every procedure due.
[[nodiscard]] TestSuite generate_mode_tests(const Model& model, std::string_view mode, const McdcOptions& opts = {});

/// Every module, plus every mode when the scope is Modes.
[[nodiscard]] std::vector<TestSuite> generate_all(const Model& model, const McdcOptions& opts = {});

/// Re-executes the unit concretely from the test's inputs and checks that it
/// follows the recorded branches, sees the recorded condition vector, and
/// produces the expected outcome.
[[nodiscard]] bool replay(const Model& model, const TestSuite& suite, const TestCase& test);

/// Columns: inputs, expected_decision, decision_location.
[[nodiscard]] std::string export_tests(const TestSuite& suite);

/// Percentage of obligations solved; Infeasible ones leave the denominator
/// unless `count_infeasible`. 100 when nothing is countable.
[[nodiscard]] double coverage_percent(const TestSuite& suite, bool count_infeasible = false);

[[nodiscard]] std::string coverage_report(const TestSuite& suite, bool count_infeasible = false);

} // namespace aasrdl
