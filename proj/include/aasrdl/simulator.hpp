#pragma once

#include "aasrdl/eval.hpp"
#include "aasrdl/profile.hpp"

#include <span>
#include <string>
#include <vector>

namespace aasrdl {

struct TraceStatus {
    enum class Kind : std::uint8_t { Completed, StoppedBySignal, GuardViolation, RuntimeError, BoundsViolation };

    Kind kind = Kind::Completed;
    std::string mode;      ///< GuardViolation
    std::int64_t cycle = 0; ///< cycle of the abort
    EvalErrorKind error = EvalErrorKind::TypeError; ///< RuntimeError
    std::string location;  ///< RuntimeError: file:line:col; BoundsViolation: variable
    std::string message;

    [[nodiscard]] bool aborted() const
    {
        return kind != Kind::Completed && kind != Kind::StoppedBySignal;
    }
    /// e.g. "Completed", "GuardViolation(GROUND_START, 1000)"
    [[nodiscard]] std::string to_string() const;
};

struct SnapshotInfo {
    std::int64_t cycle = 0;
    std::int64_t time_ms = 0;
    std::size_t mode = 0; ///< mode active during the cycle
};

/// Snapshots are stored flat: snapshot i owns values[i*width, (i+1)*width).
struct Trace {
    std::vector<std::string> var_names;
    std::vector<std::string> mode_names;
    std::int64_t base_tick = 1;
    std::vector<SnapshotInfo> snapshots;
    std::vector<Value> values;
    TraceStatus status;
    std::vector<std::string> warnings; ///< bounds warnings in non-strict mode
    std::vector<std::string> log;      ///< transition attempts when requested

    [[nodiscard]] std::size_t size() const { return snapshots.size(); }
    [[nodiscard]] std::size_t width() const { return var_names.size(); }
    [[nodiscard]] std::span<const Value> at(std::size_t i) const
    {
        return std::span<const Value>(values).subspan(i * width(), width());
    }
    [[nodiscard]] const Value& value(std::size_t i, std::size_t slot) const { return values[i * width() + slot]; }
    [[nodiscard]] const std::string& mode_at(std::size_t i) const { return mode_names[snapshots[i].mode]; }
};

struct RunOptions {
    bool strict = false;     ///< bounds violations abort the run
    bool log = false;        ///< record every transition attempt
    std::int64_t horizon = -1; ///< overrides the profile's horizon when >= 0
};

/// GCD of all procedure periods (1 when there are none).
[[nodiscard]] std::int64_t base_tick(const Model& model);

/// Simulates cycles 0..horizon. Each cycle: sample inputs, check the current
/// mode's guard, run due procedures, try transitions by priority on a staged
/// copy (rolled back when the target guard fails), record a snapshot, then
/// test the stop signal and switch mode.
[[nodiscard]] Trace run(const Model& model, const EnvProfile& profile, const RunOptions& opts = {});

/// CSV with header cycle,time_ms,mode,<vars>; ends with "# status: ...".
[[nodiscard]] std::string export_trace(const Trace& trace);

} // namespace aasrdl
