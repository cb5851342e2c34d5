#include "aasrdl/value.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace aasrdl {

std::string SourceSpan::to_string() const
{
    return file_name() + ":" + std::to_string(line) + ":" + std::to_string(col);
}

std::string_view type_name(Type t)
{
    switch (t) {
    case Type::Bool: return "bool";
    case Type::Int32: return "int32";
    case Type::Float32: return "float32";
    case Type::Float64: return "float64";
    }
    return "?";
}

std::optional<Type> type_from_name(std::string_view name)
{
    if (name == "bool") return Type::Bool;
    if (name == "int32") return Type::Int32;
    if (name == "float32") return Type::Float32;
    if (name == "float64") return Type::Float64;
    return std::nullopt;
}

std::optional<Type> promote(Type a, Type b)
{
    if (!is_numeric(a) || !is_numeric(b)) return std::nullopt;
    if (a == Type::Float64 || b == Type::Float64) return Type::Float64;
    if (a == Type::Float32 || b == Type::Float32) return Type::Float32;
    return Type::Int32;
}

bool assignable(Type to, Type from)
{
    if (to == Type::Bool || from == Type::Bool) return to == from;
    if (to == Type::Int32) return from == Type::Int32;
    return true;
}

Value Value::zero(Type t)
{
    switch (t) {
    case Type::Bool: return boolean(false);
    case Type::Int32: return int32(0);
    case Type::Float32: return float32(0.0f);
    case Type::Float64: return float64(0.0);
    }
    return {};
}

double Value::to_double() const
{
    switch (type()) {
    case Type::Bool: return as_bool() ? 1.0 : 0.0;
    case Type::Int32: return as_int32();
    case Type::Float32: return as_float32();
    case Type::Float64: return as_float64();
    }
    return 0.0;
}

Value Value::convert_to(Type t) const
{
    if (type() == t) return *this;
    if (!assignable(t, type()))
        throw std::invalid_argument(std::string("cannot convert ") + std::string(type_name(type())) + " to " +
                                    std::string(type_name(t)));
    switch (t) {
    case Type::Float32: return float32(static_cast<float>(to_double()));
    case Type::Float64: return float64(to_double());
    default: break;
    }
    throw std::invalid_argument("unreachable conversion");
}

bool Value::identical(const Value& other) const
{
    if (type() != other.type()) return false;
    switch (type()) {
    case Type::Bool: return as_bool() == other.as_bool();
    case Type::Int32: return as_int32() == other.as_int32();
    case Type::Float32: {
        float a = as_float32(), b = other.as_float32();
        return std::memcmp(&a, &b, sizeof a) == 0;
    }
    case Type::Float64: {
        double a = as_float64(), b = other.as_float64();
        return std::memcmp(&a, &b, sizeof a) == 0;
    }
    }
    return false;
}

namespace {

template <class F>
std::string shortest(F f)
{
    if (std::isnan(f)) return "nan";
    if (std::isinf(f)) return f > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, f);
    return std::string(buf, res.ptr);
}

} // namespace

std::string format_value(const Value& v)
{
    switch (v.type()) {
    case Type::Bool: return v.as_bool() ? "true" : "false";
    case Type::Int32: return std::to_string(v.as_int32());
    case Type::Float32: return shortest(v.as_float32());
    case Type::Float64: return shortest(v.as_float64());
    }
    return {};
}

std::string format_literal(const Value& v)
{
    std::string s = format_value(v);
    if (is_float(v.type()) && s.find_first_of(".enia") == std::string::npos) s += ".0";
    return s;
}

std::optional<Value> parse_value(std::string_view text, Type t)
{
    if (text.empty()) return std::nullopt;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    switch (t) {
    case Type::Bool:
        if (text == "true") return Value::boolean(true);
        if (text == "false") return Value::boolean(false);
        return std::nullopt;
    case Type::Int32: {
        std::int32_t i = 0;
        auto res = std::from_chars(first, last, i);
        if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
        return Value::int32(i);
    }
    case Type::Float32: {
        float f = 0;
        auto res = std::from_chars(first, last, f);
        if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
        return Value::float32(f);
    }
    case Type::Float64: {
        double d = 0;
        auto res = std::from_chars(first, last, d);
        if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
        return Value::float64(d);
    }
    }
    return std::nullopt;
}

} // namespace aasrdl
