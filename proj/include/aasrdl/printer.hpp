#pragma once

#include "aasrdl/model.hpp"

#include <string>

namespace aasrdl {

/// Renders an expression in concrete syntax with the minimum parentheses the
/// grammar needs. Parsing the result yields a structurally equal tree.
[[nodiscard]] std::string to_string(const Expr& e);

/// Renders a whole model in the `.arl` dialect.
[[nodiscard]] std::string print_model(const Model& m);

[[nodiscard]] std::string print_block(const Block& b, int indent);

} // namespace aasrdl
