#pragma once

#include "aasrdl/parser.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace aasrdl::testing {

inline std::string source_path(const std::string& rel) { return std::string(AASRDL_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Model parse_or_die(std::string_view text, const std::string& file = "test.arl")
{
    auto r = parse_model(text, file);
    if (!r.ok()) {
        std::string msg;
        for (const auto& d : r.diagnostics) msg += d.to_string() + "\n";
        throw std::runtime_error("parse failed:\n" + msg);
    }
    return std::move(*r.value);
}

inline Model load_model(const std::string& name)
{
    std::string path = "models/" + name;
    return parse_or_die(slurp(source_path(path)), path);
}

inline ExprPtr parse_e(std::string_view text, const DataDict& dict)
{
    auto r = parse_expr(text, dict);
    if (!r.ok()) throw std::runtime_error("bad expression: " + std::string(text));
    return *r.value;
}

inline LtlFormula parse_f(std::string_view text, const DataDict& dict)
{
    auto r = parse_ltl(text, dict);
    if (!r.ok()) throw std::runtime_error("bad formula: " + std::string(text));
    return *r.value;
}

/// Model with the given data dictionary body and a single trivial mode.
inline Model dict_model(const std::string& decls)
{
    return parse_or_die("model t datadict {" + decls + "} mode M init { guard true; }");
}

} // namespace aasrdl::testing
