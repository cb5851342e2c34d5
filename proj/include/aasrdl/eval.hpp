#pragma once

#include "aasrdl/model.hpp"

#include <span>
#include <stdexcept>

namespace aasrdl {

enum class EvalErrorKind : std::uint8_t {
    DivisionByZero,
    SqrtOfNegative,
    Int32Overflow,
    UndefinedVariable,
    UnknownModule,
    TypeError,
};

[[nodiscard]] std::string_view to_string(EvalErrorKind k);

/// A requirements error detected while evaluating. Aborts the enclosing
/// simulation cycle.
class EvalError : public std::runtime_error {
public:
    EvalError(EvalErrorKind kind, SourceSpan span, const std::string& what)
        : std::runtime_error(what), kind_(kind), span_(std::move(span))
    {
    }

    [[nodiscard]] EvalErrorKind kind() const { return kind_; }
    [[nodiscard]] const SourceSpan& span() const { return span_; }

private:
    EvalErrorKind kind_;
    SourceSpan span_;
};

/// Evaluates `e` over a valuation indexed by DataDict slot. Arithmetic runs
/// in the node's promoted type with IEEE-754 semantics; int32 overflow,
/// division by zero and sqrt of a negative number throw EvalError.
[[nodiscard]] Value eval_expr(const Expr& e, std::span<const Value> values);
[[nodiscard]] inline Value eval_expr(const Expr& e, const State& s) { return eval_expr(e, s.values); }

/// Convenience for boolean expressions.
[[nodiscard]] bool eval_bool(const Expr& e, std::span<const Value> values);

/// Hooks into statement execution. Default implementations do nothing.
class ExecObserver {
public:
    virtual ~ExecObserver() = default;
    virtual void on_assign(const Stmt&, int, const Value&) {}
    virtual void on_branch(const Stmt&, bool) {}
    virtual void on_call(const Stmt&, const ModuleDef&) {}
};

/// Executes a block against `values`. Assignments convert to the target's
/// declared type, so float32 targets are rounded through single precision.
/// `call` runs the named module's task.
void execute(const Model& model, const Block& block, std::vector<Value>& values, ExecObserver* observer = nullptr);

} // namespace aasrdl
