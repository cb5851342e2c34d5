#pragma once

#include "aasrdl/expr.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aasrdl {

struct Stmt;
using Block = std::vector<Stmt>;

struct Assign {
    std::string target;
    int slot = -1; ///< DataDict index, -1 when unresolved
    ExprPtr value;
};

struct If {
    ExprPtr cond;
    Block then_block;
    Block else_block;
};

struct Call {
    std::string module;
};

/// Loop-free statement: assignment, two-way branch, or module call.
struct Stmt {
    std::variant<Assign, If, Call> node;
    SourceSpan span;

    template <class T>
    [[nodiscard]] const T* as() const { return std::get_if<T>(&node); }
};

enum class VarKind : std::uint8_t { Internal, Input };

struct VarDecl {
    std::string name;
    Type type = Type::Int32;
    std::optional<Value> init; ///< absent: the variable starts uninitialized
    std::optional<Value> min;
    std::optional<Value> max;
    VarKind kind = VarKind::Internal;
    SourceSpan span;

    /// Declared init, or the type's zero for uninitialized variables.
    [[nodiscard]] Value initial_value() const { return init ? *init : Value::zero(type); }
    [[nodiscard]] bool in_bounds(const Value& v) const;
};

struct ConstDecl {
    std::string name;
    Value value;
    SourceSpan span;
};

struct DataDict {
    std::vector<VarDecl> vars;
    std::vector<ConstDecl> constants;

    [[nodiscard]] std::optional<int> find_var(std::string_view name) const;
    [[nodiscard]] const ConstDecl* find_const(std::string_view name) const;
};

struct Procedure {
    std::int64_t period_ms = 1;
    Block body;
    SourceSpan span;
};

struct Transition {
    std::int64_t priority = 1; ///< lower value is evaluated first
    std::string target;
    ExprPtr condition;
    Block action;
    SourceSpan span;
};

struct Mode {
    std::string name;
    ExprPtr guard;
    std::vector<Procedure> procedures;
    std::vector<Transition> transitions;
    SourceSpan span;
};

struct ModuleDef {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    Block task;
    SourceSpan span;
};

struct Model {
    std::string name;
    DataDict datadict;
    std::vector<ModuleDef> modules;
    std::vector<Mode> modes;
    std::string initial_mode;

    [[nodiscard]] std::optional<std::size_t> mode_index(std::string_view name) const;
    [[nodiscard]] const Mode* find_mode(std::string_view name) const;
    [[nodiscard]] const ModuleDef* find_module(std::string_view name) const;
    [[nodiscard]] std::size_t initial_mode_index() const;
};

/// Mutable execution state: one value per DataDict variable, the active mode,
/// the cycle counter and global time.
struct State {
    std::vector<Value> values;
    std::size_t mode = 0;
    std::int64_t cycle = 0;
    std::int64_t time_ms = 0;
};

[[nodiscard]] State initial_state(const Model& model);

/// Statement-wise equality ignoring spans.
[[nodiscard]] bool structurally_equal(const Block& a, const Block& b);
[[nodiscard]] bool structurally_equal(const Model& a, const Model& b);

/// Visits every statement (pre-order, descending into both branches).
void for_each_stmt(const Block& block, const std::function<void(const Stmt&)>& fn);

} // namespace aasrdl
