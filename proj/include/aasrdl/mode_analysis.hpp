#pragma once

#include "aasrdl/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace aasrdl {

/// A transition named by its source mode and position in that mode.
struct TransitionRef {
    std::string mode;
    std::size_t index = 0;
    std::int64_t priority = 0;
    std::string target;

    /// "<priority>-><target>", unique within a mode
    [[nodiscard]] std::string label() const;
};

struct ExclusivenessViolation {
    TransitionRef a;
    TransitionRef b;
    Witness witness;
};

struct ExclusivenessUnknown {
    TransitionRef a;
    TransitionRef b;
    std::string reason;
};

struct ExclusivenessReport {
    std::vector<ExclusivenessViolation> violations;
    std::vector<ExclusivenessUnknown> unknowns;
    std::size_t pairs_checked = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string to_text() const;
    /// mode,transition_a,transition_b,witness  (witness as var=value;...)
    [[nodiscard]] std::string to_csv() const;
};

/// Pairwise overlap of the transition conditions within each mode, ignoring
/// which states the mode can actually be in.
[[nodiscard]] ExclusivenessReport check_exclusiveness(const Model& model, const SolveOptions& opts = {});

struct ReachabilityReport {
    std::vector<std::string> reachable;   ///< declaration order
    std::vector<std::string> unreachable; ///< declaration order
    /// Shortest transition sequence from the initial mode (empty for it).
    std::map<std::string, std::vector<TransitionRef>> paths;
    /// Transitions kept because the solver could not decide them.
    std::vector<std::pair<TransitionRef, std::string>> unknowns;

    [[nodiscard]] bool ok() const { return unreachable.empty(); }
    [[nodiscard]] std::string to_text() const;
};

/// Breadth-first search from the initial mode over transitions whose
/// condition is not Unsat into modes whose guard is not Unsat.
[[nodiscard]] ReachabilityReport check_reachability(const Model& model, const SolveOptions& opts = {});

[[nodiscard]] std::string format_witness(const Witness& w);

} // namespace aasrdl
