#pragma once

#include "aasrdl/ltl_formula.hpp"
#include "aasrdl/simulator.hpp"

#include <vector>

namespace aasrdl {

/// Finite-trace semantics over the first `length` snapshots (the whole trace
/// when `length` is npos). X is strong: false at the last position. An atom
/// whose evaluation raises an error is false.
[[nodiscard]] bool eval_ltl(const LtlNode& f, const Trace& trace, std::size_t i = 0,
                            std::size_t length = static_cast<std::size_t>(-1));

/// Truth value at every position of the prefix, computed bottom-up.
[[nodiscard]] std::vector<char> eval_ltl_all(const LtlNode& f, const Trace& trace,
                                             std::size_t length = static_cast<std::size_t>(-1));

/// Same semantics over a plain sequence of valuations.
[[nodiscard]] std::vector<char> eval_ltl_all(const LtlNode& f, const std::vector<std::vector<Value>>& states);

} // namespace aasrdl
