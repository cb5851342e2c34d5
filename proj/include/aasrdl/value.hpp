#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace aasrdl {

/// Location of a syntactic element. Lines and columns are 1-based; `file`
/// is shared by every span produced from one input.
struct SourceSpan {
    std::shared_ptr<const std::string> file;
    std::uint32_t line = 0;
    std::uint32_t col = 0;
    std::uint32_t end_line = 0;
    std::uint32_t end_col = 0;

    [[nodiscard]] std::string file_name() const { return file ? *file : std::string{}; }
    /// "file:line:col"
    [[nodiscard]] std::string to_string() const;
};

enum class Type : std::uint8_t { Bool, Int32, Float32, Float64 };

[[nodiscard]] std::string_view type_name(Type t);
[[nodiscard]] std::optional<Type> type_from_name(std::string_view name);

[[nodiscard]] constexpr bool is_numeric(Type t) { return t != Type::Bool; }
[[nodiscard]] constexpr bool is_float(Type t) { return t == Type::Float32 || t == Type::Float64; }

/// Arithmetic promotion: int32 op float -> that float, float32 op float64 ->
/// float64. Returns nullopt when either side is bool.
[[nodiscard]] std::optional<Type> promote(Type a, Type b);

/// Whether a value of type `from` may be stored into a variable of type `to`.
/// Numeric widening and float narrowing are allowed; float -> int32 and any
/// bool/numeric mix are not.
[[nodiscard]] bool assignable(Type to, Type from);

/// Typed scalar. float32 payloads are genuine 32-bit floats, so anything
/// stored as float32 has been rounded through the single-precision format.
class Value {
public:
    Value() : v_(false) {}

    static Value boolean(bool b) { return Value(b); }
    static Value int32(std::int32_t i) { return Value(i); }
    static Value float32(float f) { return Value(f); }
    static Value float64(double d) { return Value(d); }
    /// Zero of the given type (`false` for bool).
    static Value zero(Type t);

    [[nodiscard]] Type type() const { return static_cast<Type>(v_.index()); }

    [[nodiscard]] bool as_bool() const { return std::get<bool>(v_); }
    [[nodiscard]] std::int32_t as_int32() const { return std::get<std::int32_t>(v_); }
    [[nodiscard]] float as_float32() const { return std::get<float>(v_); }
    [[nodiscard]] double as_float64() const { return std::get<double>(v_); }

    /// Numeric value widened to double (bool maps to 0/1).
    [[nodiscard]] double to_double() const;

    /// Converts to `t` following assignment rules (int -> float, float64 ->
    /// float32 rounding). Throws std::invalid_argument for disallowed pairs.
    [[nodiscard]] Value convert_to(Type t) const;

    /// Same type and same bit pattern.
    [[nodiscard]] bool identical(const Value& other) const;

    friend bool operator==(const Value& a, const Value& b) { return a.identical(b); }

private:
    explicit Value(bool b) : v_(b) {}
    explicit Value(std::int32_t i) : v_(i) {}
    explicit Value(float f) : v_(f) {}
    explicit Value(double d) : v_(d) {}

    // Alternative order must match Type.
    std::variant<bool, std::int32_t, float, double> v_;
};

/// Shortest decimal text that parses back to the same value (floats use the
/// round-trip form of their own width; bools print as true/false).
[[nodiscard]] std::string format_value(const Value& v);

/// Like format_value, but float values always carry a '.' or exponent so the
/// text lexes as a floating literal.
[[nodiscard]] std::string format_literal(const Value& v);

/// Parses a decimal literal into a value of type `t`. Returns nullopt on
/// malformed text or when the value is not representable.
[[nodiscard]] std::optional<Value> parse_value(std::string_view text, Type t);

} // namespace aasrdl
