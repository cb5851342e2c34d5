#include "aasrdl/estimate.hpp"

#include "aasrdl/ltl.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aasrdl {

std::uint64_t sample_count(double delta, double sigma)
{
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("sigma must lie in (0,1)");
    long double n = std::log(2.0L / sigma) / (2.0L * delta * delta);
    return static_cast<std::uint64_t>(std::ceil(n));
}

namespace {

std::string abort_kind(const TraceStatus& s)
{
    switch (s.kind) {
    case TraceStatus::Kind::GuardViolation: return "GuardViolation";
    case TraceStatus::Kind::RuntimeError: return "RuntimeError";
    case TraceStatus::Kind::BoundsViolation: return "BoundsViolation";
    default: return "";
    }
}

} // namespace

std::vector<EstimationResult> estimate_all(const Model& model, const EnvProfile& profile,
                                           const std::vector<LtlFormula>& formulas, const EstimationConfig& cfg)
{
    if (cfg.horizons.empty()) throw std::invalid_argument("at least one horizon is required");
    if (!std::is_sorted(cfg.horizons.begin(), cfg.horizons.end()) || cfg.horizons.front() < 0)
        throw std::invalid_argument("horizons must be non-negative and ascending");
    const std::uint64_t n = cfg.samples ? *cfg.samples : sample_count(cfg.delta, cfg.sigma);
    const std::size_t nh = cfg.horizons.size(), nf = formulas.size();
    const std::int64_t max_h = cfg.horizons.back();

    // per-thread tallies; every claimed run completes, so together they
    // cover exactly the prefix [0, done)
    struct Tally {
        std::vector<std::uint64_t> successes, aborted;
        std::map<std::string, std::uint64_t> kinds;
    };
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> expired{false};
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(cfg.timeout_s);

    auto worker = [&](Tally& t) {
        t.successes.assign(nf * nh, 0);
        t.aborted.assign(nf * nh, 0);
        for (;;) {
            if (cfg.timeout_s > 0 && std::chrono::steady_clock::now() >= deadline) {
                expired = true;
                return;
            }
            std::uint64_t j = next.fetch_add(1);
            if (j >= n) return;
            EnvProfile p = profile;
            p.seed = cfg.seed + j;
            RunOptions ro;
            ro.horizon = max_h;
            Trace tr = run(model, p, ro);
            if (auto k = abort_kind(tr.status); !k.empty()) ++t.kinds[k];
            for (std::size_t f = 0; f < nf; ++f) {
                for (std::size_t h = 0; h < nh; ++h) {
                    std::size_t len = static_cast<std::size_t>(cfg.horizons[h]) + 1;
                    if (tr.status.aborted() && tr.size() < len)
                        ++t.aborted[f * nh + h];
                    else if (eval_ltl(*formulas[f], tr, 0, len))
                        ++t.successes[f * nh + h];
                }
            }
        }
    };
    unsigned jobs = std::max(1u, cfg.jobs);
    std::vector<Tally> tallies(jobs);
    if (jobs == 1) {
        worker(tallies[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker, std::ref(tallies[t]));
        for (auto& t : pool) t.join();
    }
    const std::uint64_t done = std::min<std::uint64_t>(next.load(), n);

    std::vector<EstimationResult> out(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        auto& r = out[f];
        r.requested = n;
        r.incomplete = expired && done < n;
        for (const auto& t : tallies)
            for (const auto& [k, c] : t.kinds) r.aborts[k] += c;
        for (std::size_t h = 0; h < nh; ++h) {
            HorizonRow row;
            row.horizon = cfg.horizons[h];
            row.samples = done;
            for (const auto& t : tallies) {
                row.successes += t.successes[f * nh + h];
                row.aborted += t.aborted[f * nh + h];
            }
            row.estimate = done ? static_cast<double>(row.successes) / static_cast<double>(done) : 0.0;
            row.lo = std::max(0.0, row.estimate - cfg.delta);
            row.hi = std::min(1.0, row.estimate + cfg.delta);
            r.rows.push_back(row);
        }
    }
    return out;
}

EstimationResult estimate(const Model& model, const EnvProfile& profile, const LtlNode& formula,
                          const EstimationConfig& cfg)
{
    // non-owning handle; the caller keeps the formula alive
    LtlFormula f(std::shared_ptr<const LtlNode>(), &formula);
    return estimate_all(model, profile, {f}, cfg).front();
}

namespace {

std::string percent(double p)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", p * 100.0);
    return buf;
}

} // namespace

std::string format_estimates(const std::vector<std::string>& names, const std::vector<EstimationResult>& results)
{
    std::ostringstream os;
    std::vector<std::size_t> width;
    for (const auto& n : names) width.push_back(std::max<std::size_t>(n.size(), 8));
    os << "horizon";
    for (std::size_t f = 0; f < names.size(); ++f) os << "  " << std::string(width[f] - names[f].size(), ' ') << names[f];
    os << '\n';
    if (results.empty()) return os.str();
    for (std::size_t h = 0; h < results.front().rows.size(); ++h) {
        std::string hs = std::to_string(results.front().rows[h].horizon);
        os << std::string(hs.size() < 7 ? 7 - hs.size() : 0, ' ') << hs;
        for (std::size_t f = 0; f < results.size(); ++f) {
            std::string cell = percent(results[f].rows[h].estimate);
            os << "  " << std::string(width[f] > cell.size() ? width[f] - cell.size() : 0, ' ') << cell;
        }
        os << '\n';
    }
    const auto& r0 = results.front();
    os << "runs: " << (r0.rows.empty() ? 0 : r0.rows.front().samples) << " of " << r0.requested;
    if (r0.incomplete) os << " (incomplete: timeout)";
    os << '\n';
    for (const auto& [k, c] : r0.aborts) os << "aborted runs (" << k << "): " << c << '\n';
    return os.str();
}

std::string estimates_csv(const std::vector<std::string>& names, const std::vector<EstimationResult>& results)
{
    std::ostringstream os;
    os << "property,horizon,n,successes,aborted,estimate,lo,hi\n";
    for (std::size_t f = 0; f < results.size(); ++f)
        for (const auto& r : results[f].rows)
            os << names[f] << ',' << r.horizon << ',' << r.samples << ',' << r.successes << ',' << r.aborted << ','
               << format_value(Value::float64(r.estimate)) << ',' << format_value(Value::float64(r.lo)) << ','
               << format_value(Value::float64(r.hi)) << '\n';
    return os.str();
}

} // namespace aasrdl
