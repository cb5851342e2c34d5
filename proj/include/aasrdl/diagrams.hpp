#pragma once

#include "aasrdl/dot.hpp"
#include "aasrdl/model.hpp"

#include <stdexcept>
#include <string_view>

namespace aasrdl {

/// One node per mode (initial mode drawn as a double circle), one edge per
/// transition labelled with the condition; priority sits at the tail.
[[nodiscard]] DotGraph mode_transition_diagram(const Model& model);

/// One cluster per procedure of `mode`, labelled `period=N`, holding the
/// modules it calls in call order, chained by sequence edges.
/// Throws std::invalid_argument for an unknown mode.
[[nodiscard]] DotGraph module_relation_diagram(const Model& model, std::string_view mode);

/// Dependency graph of one module. Inputs are boxes, outputs double boxes,
/// and members of cycles longer than one are red.
[[nodiscard]] DotGraph variable_dependency_diagram(const ModuleDef& module, const DataDict& dict);

} // namespace aasrdl
