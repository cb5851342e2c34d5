#pragma once

#include "aasrdl/model.hpp"

#include <string>
#include <vector>

namespace aasrdl {

struct TypeDiagnostic {
    SourceSpan span;
    std::string expected; ///< type name or category ("numeric")
    std::string actual;
    std::string message;
};

/// An operand implicitly widened to its operator's promoted type.
struct Promotion {
    SourceSpan span;
    Type from;
    Type to;
};

struct TypeReport {
    std::vector<TypeDiagnostic> diagnostics;
    std::vector<Promotion> promotions;

    [[nodiscard]] bool ok() const { return diagnostics.empty(); }
};

/// Checks a single expression; `expected` constrains the root type.
void type_check_expr(const Expr& e, std::optional<Type> expected, TypeReport& report);

/// Type-checks every guard, condition, action, procedure body and task.
/// Unresolved names are left to check_model and produce no diagnostic here.
[[nodiscard]] TypeReport type_check(const Model& model);

} // namespace aasrdl
