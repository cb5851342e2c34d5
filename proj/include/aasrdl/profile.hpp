#pragma once

#include "aasrdl/model.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace aasrdl {

/// Stimulus for one input variable.
struct Stimulus {
    enum class Kind : std::uint8_t { Constant, Uniform, Normal, Timeseries };

    Kind kind = Kind::Constant;
    Value constant;
    double lo = 0, hi = 1;          ///< uniform; a bool input draws a fair coin
    double mean = 0, stddev = 1;    ///< normal, clamped to the variable's bounds
    std::vector<std::pair<std::int64_t, Value>> points; ///< timeseries, step-held, ascending cycles
};

struct EnvProfile {
    std::uint64_t seed = 0;
    std::int64_t horizon = 100;
    ExprPtr stop; ///< optional stop signal
    std::map<std::string, Stimulus> inputs;
};

/// Reads the JSON profile format:
///   {"seed": 1, "horizon": 100, "stop": "<expr>",
///    "inputs": {"x": {"kind": "constant", "value": 3},
///               "u": {"kind": "uniform", "lo": 0, "hi": 1},
///               "n": {"kind": "normal", "mean": 0, "stddev": 1},
///               "s": {"kind": "timeseries", "points": [[0, 1], [10, 2]]}}}
/// Every input variable needs exactly one stimulus. Errors are returned as
/// messages; the profile is valid only when the list is empty.
[[nodiscard]] std::vector<std::string> load_profile(const std::string& json_text, const DataDict& dict,
                                                    EnvProfile& out);

/// Checks stimulus coverage and value types against the DataDict.
[[nodiscard]] std::vector<std::string> validate_profile(const EnvProfile& p, const DataDict& dict);

/// Profile with every input held at its initial value.
[[nodiscard]] EnvProfile default_profile(const DataDict& dict);

/// Deterministic sampler. Draws are taken from one 64-bit Mersenne Twister
/// with hand-written conversions, so streams match across platforms.
class StimulusSampler {
public:
    StimulusSampler(const EnvProfile& p, const DataDict& dict);

    /// Writes the cycle-k value of every input variable into `values`.
    void apply(std::int64_t cycle, std::vector<Value>& values);

private:
    double unit();
    double gaussian();

    struct Entry {
        int slot;
        const Stimulus* stim;
        const VarDecl* decl;
    };
    std::vector<Entry> entries_;
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0;
};

} // namespace aasrdl
