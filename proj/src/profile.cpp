#include "aasrdl/profile.hpp"

#include "aasrdl/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aasrdl {

namespace {

using nlohmann::json;

std::optional<Value> json_value(const json& j, Type t)
{
    if (t == Type::Bool) {
        if (j.is_boolean()) return Value::boolean(j.get<bool>());
        return std::nullopt;
    }
    if (!j.is_number()) return std::nullopt;
    if (t == Type::Int32) {
        if (!j.is_number_integer()) return std::nullopt;
        auto v = j.get<std::int64_t>();
        if (v < INT32_MIN || v > INT32_MAX) return std::nullopt;
        return Value::int32(static_cast<std::int32_t>(v));
    }
    double d = j.get<double>();
    return t == Type::Float32 ? Value::float32(static_cast<float>(d)) : Value::float64(d);
}

double num(const json& o, const char* key, double dflt, std::vector<std::string>& errors, const std::string& var)
{
    if (!o.contains(key)) return dflt;
    if (!o[key].is_number()) {
        errors.push_back("input '" + var + "': '" + key + "' must be a number");
        return dflt;
    }
    return o[key].get<double>();
}

Value clamp_to(const VarDecl& d, double v)
{
    if (d.min) v = std::max(v, d.min->to_double());
    if (d.max) v = std::min(v, d.max->to_double());
    switch (d.type) {
    case Type::Int32:
        v = std::clamp(std::round(v), static_cast<double>(INT32_MIN), static_cast<double>(INT32_MAX));
        return Value::int32(static_cast<std::int32_t>(v));
    case Type::Float32: return Value::float32(static_cast<float>(v));
    case Type::Float64: return Value::float64(v);
    default: return Value::boolean(v != 0);
    }
}

} // namespace

std::vector<std::string> load_profile(const std::string& json_text, const DataDict& dict, EnvProfile& out)
{
    std::vector<std::string> errors;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        return {std::string("profile is not valid JSON: ") + e.what()};
    }
    if (!j.is_object()) return {"profile must be a JSON object"};
    out = EnvProfile{};
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned())
            out.seed = j["seed"].get<std::uint64_t>();
        else if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)
            out.seed = static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
        else
            errors.emplace_back("'seed' must be a non-negative integer");
    }
    if (j.contains("horizon")) {
        if (j["horizon"].is_number_integer() && j["horizon"].get<std::int64_t>() >= 0)
            out.horizon = j["horizon"].get<std::int64_t>();
        else
            errors.emplace_back("'horizon' must be a non-negative integer");
    }
    if (j.contains("stop") && !j["stop"].is_null()) {
        if (!j["stop"].is_string()) {
            errors.emplace_back("'stop' must be an expression string");
        } else {
            auto e = parse_expr(j["stop"].get<std::string>(), dict, "<stop>");
            for (const auto& d : e.diagnostics) errors.push_back(d.to_string());
            if (e.ok()) {
                if ((*e.value)->type != Type::Bool)
                    errors.emplace_back("'stop' must be a boolean expression");
                else
                    out.stop = *e.value;
            }
        }
    }
    if (j.contains("inputs")) {
        if (!j["inputs"].is_object()) return {"'inputs' must be an object"};
        for (const auto& [name, spec] : j["inputs"].items()) {
            auto slot = dict.find_var(name);
            if (!slot) {
                errors.push_back("input '" + name + "' is not a declared variable");
                continue;
            }
            const VarDecl& d = dict.vars[*slot];
            if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
                errors.push_back("input '" + name + "' needs a \"kind\"");
                continue;
            }
            Stimulus s;
            std::string kind = spec["kind"].get<std::string>();
            if (kind == "constant") {
                s.kind = Stimulus::Kind::Constant;
                auto v = spec.contains("value") ? json_value(spec["value"], d.type) : std::nullopt;
                if (!v) {
                    errors.push_back("input '" + name + "': constant needs a " + std::string(type_name(d.type)) +
                                     " \"value\"");
                    continue;
                }
                s.constant = *v;
            } else if (kind == "uniform") {
                s.kind = Stimulus::Kind::Uniform;
                s.lo = num(spec, "lo", d.min ? d.min->to_double() : 0.0, errors, name);
                s.hi = num(spec, "hi", d.max ? d.max->to_double() : 1.0, errors, name);
                if (s.lo > s.hi) errors.push_back("input '" + name + "': lo exceeds hi");
            } else if (kind == "normal") {
                s.kind = Stimulus::Kind::Normal;
                s.mean = num(spec, "mean", 0.0, errors, name);
                s.stddev = num(spec, "stddev", 1.0, errors, name);
                if (s.stddev < 0) errors.push_back("input '" + name + "': stddev is negative");
                if (d.type == Type::Bool) errors.push_back("input '" + name + "': normal needs a numeric variable");
            } else if (kind == "timeseries") {
                s.kind = Stimulus::Kind::Timeseries;
                if (!spec.contains("points") || !spec["points"].is_array()) {
                    errors.push_back("input '" + name + "': timeseries needs \"points\"");
                    continue;
                }
                for (const auto& p : spec["points"]) {
                    std::optional<Value> v;
                    if (p.is_array() && p.size() == 2 && p[0].is_number_integer()) v = json_value(p[1], d.type);
                    if (!v) {
                        errors.push_back("input '" + name + "': each point is [cycle, value]");
                        break;
                    }
                    s.points.emplace_back(p[0].get<std::int64_t>(), *v);
                }
                if (!std::is_sorted(s.points.begin(), s.points.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; }))
                    errors.push_back("input '" + name + "': points must be in ascending cycle order");
            } else {
                errors.push_back("input '" + name + "': unknown kind '" + kind + "'");
                continue;
            }
            out.inputs[name] = std::move(s);
        }
    }
    if (errors.empty()) errors = validate_profile(out, dict);
    return errors;
}

std::vector<std::string> validate_profile(const EnvProfile& p, const DataDict& dict)
{
    std::vector<std::string> errors;
    for (const auto& v : dict.vars)
        if (v.kind == VarKind::Input && !p.inputs.count(v.name))
            errors.push_back("input '" + v.name + "' has no stimulus");
    for (const auto& [name, s] : p.inputs) {
        auto slot = dict.find_var(name);
        if (!slot) {
            errors.push_back("stimulus for undeclared variable '" + name + "'");
            continue;
        }
        const auto& d = dict.vars[*slot];
        if (d.kind != VarKind::Input) errors.push_back("'" + name + "' is not an input variable");
        auto check = [&](const Value& v) {
            if (v.type() != d.type) errors.push_back("input '" + name + "': value has the wrong type");
            else if (!d.in_bounds(v)) errors.push_back("input '" + name + "': value " + format_value(v) + " is out of bounds");
        };
        if (s.kind == Stimulus::Kind::Constant) check(s.constant);
        for (const auto& [c, v] : s.points) check(v);
    }
    return errors;
}

EnvProfile default_profile(const DataDict& dict)
{
    EnvProfile p;
    for (const auto& v : dict.vars)
        if (v.kind == VarKind::Input) p.inputs[v.name].constant = v.initial_value();
    return p;
}

StimulusSampler::StimulusSampler(const EnvProfile& p, const DataDict& dict) : rng_(p.seed)
{
    for (std::size_t i = 0; i < dict.vars.size(); ++i) {
        auto it = p.inputs.find(dict.vars[i].name);
        if (it != p.inputs.end()) entries_.push_back({static_cast<int>(i), &it->second, &dict.vars[i]});
    }
}

double StimulusSampler::unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double StimulusSampler::gaussian()
{
    // Box-Muller, both halves used
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 1.0 - unit(), u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2 * std::numbers::pi * u2);
}

void StimulusSampler::apply(std::int64_t cycle, std::vector<Value>& values)
{
    for (const auto& e : entries_) {
        const Stimulus& s = *e.stim;
        Value& dst = values[e.slot];
        switch (s.kind) {
        case Stimulus::Kind::Constant: dst = s.constant; break;
        case Stimulus::Kind::Uniform:
            if (e.decl->type == Type::Bool) {
                dst = Value::boolean(unit() < 0.5);
            } else if (e.decl->type == Type::Int32) {
                double lo = std::ceil(s.lo), hi = std::floor(s.hi);
                dst = clamp_to(*e.decl, std::min(hi, lo + std::floor(unit() * (hi - lo + 1))));
            } else {
                dst = clamp_to(*e.decl, s.lo + unit() * (s.hi - s.lo));
            }
            break;
        case Stimulus::Kind::Normal: dst = clamp_to(*e.decl, s.mean + s.stddev * gaussian()); break;
        case Stimulus::Kind::Timeseries: {
            auto it = std::upper_bound(s.points.begin(), s.points.end(), cycle,
                                       [](std::int64_t c, const auto& p) { return c < p.first; });
            dst = it == s.points.begin() ? e.decl->initial_value() : std::prev(it)->second;
            break;
        }
        }
    }
}

} // namespace aasrdl
