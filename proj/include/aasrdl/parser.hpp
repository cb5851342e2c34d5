#pragma once

#include "aasrdl/ltl_formula.hpp"
#include "aasrdl/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aasrdl {

enum class Severity : std::uint8_t { Error, Warning };

/// Parser diagnostic codes:
///   P001 syntax error            P008 unknown transition target
///   P002 unknown type name       P009 call to undeclared module
///   P003 duplicate name          P010 recursive module call
///   P004 multiple initial modes  P011 duplicate transition priority
///   P005 missing initial mode    P012 period/priority below 1
///   P006 invalid literal         P013 unexpected character
///   P007 bounds violated         P021 unknown variable in LTL atom
///                                P022 LTL atom is not boolean
struct ParseDiagnostic {
    SourceSpan span;
    Severity severity = Severity::Error;
    std::string message;
    std::string code;

    /// "CODE file:line:col message"
    [[nodiscard]] std::string to_string() const;
};

template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<ParseDiagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return value.has_value(); }
};

/// Parses an `.arl` model. Errors suppress the model; warnings do not.
[[nodiscard]] ParseResult<Model> parse_model(std::string_view text, std::string file = "<input>");

/// Parses one temporal property. Atoms must be boolean predicates over
/// `dict`. Operators: X F G U ! && || ->.
[[nodiscard]] ParseResult<LtlFormula> parse_ltl(std::string_view text, const DataDict& dict,
                                                std::string file = "<property>");

/// Parses a stand-alone expression with names resolved against `dict`.
[[nodiscard]] ParseResult<ExprPtr> parse_expr(std::string_view text, const DataDict& dict,
                                              std::string file = "<expr>");

} // namespace aasrdl
