#pragma once

#include "aasrdl/value.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace aasrdl {

enum class UnaryOp : std::uint8_t { Neg, Not, Sqrt, Abs };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

[[nodiscard]] std::string_view op_symbol(UnaryOp op);
[[nodiscard]] std::string_view op_symbol(BinaryOp op);
[[nodiscard]] constexpr bool is_comparison(BinaryOp op) { return op >= BinaryOp::Lt && op <= BinaryOp::Ne; }
[[nodiscard]] constexpr bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
    Value value;
};

/// Reference to a DataDict variable. `slot` is the declaration index, or -1
/// when the name does not resolve.
struct VarRef {
    std::string name;
    int slot = -1;
};

/// Reference to a named constant; the value is captured at construction.
struct ConstRef {
    std::string name;
    Value value;
};

struct Unary {
    UnaryOp op;
    ExprPtr operand;
};

struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
    /// Type both operands are promoted to before the operation.
    std::optional<Type> operand_type;
};

/// Conversion introduced by symbolic substitution (assignment of an int32
/// expression to a float variable, or float64 to float32). Never parsed.
struct Cast {
    Type to;
    ExprPtr operand;
};

/// Immutable expression node. `type` is computed at construction and is
/// empty when the node is ill-typed or mentions an unresolved name.
struct Expr {
    using Node = std::variant<Literal, VarRef, ConstRef, Unary, Binary, Cast>;

    Node node;
    SourceSpan span;
    std::optional<Type> type;

    template <class T>
    [[nodiscard]] const T* as() const { return std::get_if<T>(&node); }
};

namespace expr {

ExprPtr literal(Value v, SourceSpan span = {});
ExprPtr boolean(bool b, SourceSpan span = {});
ExprPtr var(std::string name, int slot, std::optional<Type> type, SourceSpan span = {});
ExprPtr constant(std::string name, Value v, SourceSpan span = {});
ExprPtr unary(UnaryOp op, ExprPtr operand, SourceSpan span = {});
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr cast(Type to, ExprPtr operand, SourceSpan span = {});

ExprPtr conj(ExprPtr a, ExprPtr b);
ExprPtr disj(ExprPtr a, ExprPtr b);
ExprPtr negate(ExprPtr a);
/// Conjunction of all terms; `true` when empty.
ExprPtr conj_all(const std::vector<ExprPtr>& terms);

} // namespace expr

/// Equality of trees ignoring source spans.
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

/// Calls `fn` for every variable reference in pre-order.
void for_each_var(const Expr& e, const std::function<void(const VarRef&, const SourceSpan&)>& fn);

/// Replaces variable references by slot. `store[slot]`, when non-null, is the
/// replacement; a Cast is inserted when the replacement's type differs from
/// the referenced variable's type.
[[nodiscard]] ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& store);

/// Whether the expression contains a && or || node (at any depth).
[[nodiscard]] bool contains_logical(const Expr& e);

} // namespace aasrdl
