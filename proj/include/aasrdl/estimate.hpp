#pragma once

#include "aasrdl/ltl_formula.hpp"
#include "aasrdl/simulator.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aasrdl {

/// Runs needed for a two-sided Hoeffding bound: ceil(ln(2/sigma) / (2 delta^2)).
/// Throws std::invalid_argument unless both parameters lie in (0,1).
[[nodiscard]] std::uint64_t sample_count(double delta, double sigma);

struct EstimationConfig {
    double delta = 0.01;
    double sigma = 0.05;
    std::vector<std::int64_t> horizons; ///< ascending cycle counts
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> samples; ///< overrides sample_count
    unsigned jobs = 1;
    double timeout_s = 0; ///< wall-clock budget, 0 for none
};

struct HorizonRow {
    std::int64_t horizon = 0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
    std::uint64_t aborted = 0; ///< runs that aborted before reaching this horizon
    double estimate = 0;
    double lo = 0, hi = 0;
};

struct EstimationResult {
    std::vector<HorizonRow> rows;
    std::map<std::string, std::uint64_t> aborts; ///< per failure kind, whole batch
    std::uint64_t requested = 0;
    bool incomplete = false; ///< timeout hit; rows cover the runs finished
};

/// Monte Carlo estimate of P(trace |= formula) per horizon. Run j uses seed
/// cfg.seed + j and is simulated to the largest horizon; horizon h judges
/// the prefix of h+1 snapshots. Runs that abort before h fail at h.
[[nodiscard]] EstimationResult estimate(const Model& model, const EnvProfile& profile, const LtlNode& formula,
                                        const EstimationConfig& cfg);

/// Several properties over one shared run set.
[[nodiscard]] std::vector<EstimationResult> estimate_all(const Model& model, const EnvProfile& profile,
                                                         const std::vector<LtlFormula>& formulas,
                                                         const EstimationConfig& cfg);

/// Rows = horizons, columns = properties, cells = percentages.
[[nodiscard]] std::string format_estimates(const std::vector<std::string>& names,
                                           const std::vector<EstimationResult>& results);

/// property,horizon,n,successes,aborted,estimate,lo,hi
[[nodiscard]] std::string estimates_csv(const std::vector<std::string>& names,
                                        const std::vector<EstimationResult>& results);

} // namespace aasrdl
