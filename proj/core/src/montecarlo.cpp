#include "errcred/montecarlo.hpp"

#include "errcred/semantics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace errcred {

TrialOutcome run_with(const ExprPtr& e, RandomSource& src, std::uint64_t step_budget) {
    TrialOutcome out;
    Config cfg = Config::initial(e);
    for (;;) {
        if (cfg.expr->is_value()) {
            out.kind = TrialOutcome::Kind::Value;
            out.value = Val(cfg.expr);
            return out;
        }
        if (out.steps >= step_budget) {
            out.kind = TrialOutcome::Kind::BudgetExhausted;
            return out;
        }
        Stepped r = reduce(cfg);
        switch (r.tag) {
        case Stepped::Tag::Stuck:
            out.kind = TrialOutcome::Kind::Stuck;
            return out;
        case Stepped::Tag::Det:
            cfg = std::move(r.next);
            break;
        case Stepped::Tag::Rand:
            cfg = r.resolve(src.uniform(r.bound));
            break;
        }
        ++out.steps;
    }
}

TrialOutcome run_once(const ExprPtr& e, std::uint64_t seed, std::uint64_t step_budget) {
    SeededSource src(seed);
    return run_with(e, src, step_budget);
}

double hoeffding_tolerance(std::uint64_t trials, double delta) {
    if (trials == 0) throw std::invalid_argument("hoeffding_tolerance: trials must be positive");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("hoeffding_tolerance: delta must be in (0, 1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t i) { return splitmix64(seed + i); }

Estimate estimate(const ExprPtr& e, const Postcondition& post, std::uint64_t trials, std::uint64_t seed,
                  std::uint64_t step_budget, double delta) {
    if (trials == 0) throw std::invalid_argument("estimate: trials must be positive");
    Estimate est;
    est.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const TrialOutcome t = run_once(e, trial_seed(seed, i), step_budget);
        switch (t.kind) {
        case TrialOutcome::Kind::Value:
            if (post(*t.value)) ++est.successes;
            break;
        case TrialOutcome::Kind::Stuck:
            ++est.stuck;
            break;
        case TrialOutcome::Kind::BudgetExhausted:
            ++est.exhausted;
            break;
        }
    }
    est.freq = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.tolerance = hoeffding_tolerance(trials, delta);
    est.confidence = 1.0 - delta;
    return est;
}

nlohmann::json estimate_to_json(const Estimate& e) {
    return {{"trials", e.trials},
            {"successes", e.successes},
            {"stuck", e.stuck},
            {"budget_exhausted", e.exhausted},
            {"freq", e.freq},
            {"failure_freq", e.failure_freq()},
            {"tolerance", e.tolerance},
            {"confidence", e.confidence}};
}

nlohmann::json rng_spec_json() {
    auto hex = [](std::uint64_t v) {
        char buf[19];
        std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(v));
        return std::string(buf);
    };
    return {{"name", "splitmix64"},
            {"gamma", hex(kSplitMixGamma)},
            {"mul1", hex(kSplitMixMul1)},
            {"mul2", hex(kSplitMixMul2)},
            {"uniform", "rejection below (2^64 mod range), then modulo"},
            {"trial_seed", "splitmix64(seed + i)"}};
}

} // namespace errcred
