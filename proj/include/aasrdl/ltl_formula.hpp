#pragma once

#include "aasrdl/expr.hpp"

#include <memory>
#include <string>

namespace aasrdl {

enum class LtlOp : std::uint8_t { Atom, Not, And, Or, Implies, Next, Eventually, Always, Until };

struct LtlNode;
using LtlFormula = std::shared_ptr<const LtlNode>;

/// Finite-trace temporal formula; atoms are boolean state predicates.
struct LtlNode {
    LtlOp op = LtlOp::Atom;
    ExprPtr atom;    ///< set iff op == Atom
    LtlFormula lhs;  ///< operand of unary ops, left operand of binary ops
    LtlFormula rhs;  ///< right operand of binary ops
    SourceSpan span;
};

namespace ltl {

LtlFormula atom(ExprPtr e);
LtlFormula negation(LtlFormula f);
LtlFormula conjunction(LtlFormula a, LtlFormula b);
LtlFormula disjunction(LtlFormula a, LtlFormula b);
LtlFormula implies(LtlFormula a, LtlFormula b);
LtlFormula next(LtlFormula f);
LtlFormula eventually(LtlFormula f);
LtlFormula always(LtlFormula f);
LtlFormula until(LtlFormula a, LtlFormula b);

} // namespace ltl

[[nodiscard]] bool is_unary(LtlOp op);

/// Fully parenthesized concrete syntax; reparses to an equal formula.
[[nodiscard]] std::string to_string(const LtlNode& f);

/// Equality ignoring spans.
[[nodiscard]] bool structurally_equal(const LtlNode& a, const LtlNode& b);

} // namespace aasrdl
