#pragma once

// Seeded single-path execution and frequency estimation.

#include "errcred/postcondition.hpp"
#include "errcred/random.hpp"
#include "errcred/syntax.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>

namespace errcred {

inline constexpr std::uint64_t kDefaultStepBudget = 100'000;

struct TrialOutcome {
    enum class Kind { Value, Stuck, BudgetExhausted };

    Kind kind = Kind::BudgetExhausted;
    std::optional<Val> value;
    std::uint64_t steps = 0;
};

/// Runs one path, resolving each sample with SplitMix64 seeded by `seed`.
TrialOutcome run_once(const ExprPtr& e, std::uint64_t seed, std::uint64_t step_budget = kDefaultStepBudget);

/// Same, drawing from an arbitrary source.
TrialOutcome run_with(const ExprPtr& e, RandomSource& src, std::uint64_t step_budget = kDefaultStepBudget);

struct Estimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t stuck = 0;
    std::uint64_t exhausted = 0;
    double freq = 0;
    double tolerance = 0;
    double confidence = 0;

    /// Fraction of trials that did not end in a value satisfying the post.
    double failure_freq() const { return 1.0 - freq; }
};

/// Hoeffding radius sqrt(ln(2/delta) / (2 trials)).
double hoeffding_tolerance(std::uint64_t trials, double delta);

/// Seed of trial i: splitmix64(seed + i).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t i);

Estimate estimate(const ExprPtr& e, const Postcondition& post, std::uint64_t trials, std::uint64_t seed,
                  std::uint64_t step_budget = kDefaultStepBudget, double delta = 1e-3);

/// Frequency of `success` over seeded trials of a host-level runner.
template <class F>
Estimate estimate_host(F&& success, std::uint64_t trials, std::uint64_t seed, double delta = 1e-3) {
    Estimate est;
    est.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        SeededSource src(trial_seed(seed, i));
        if (success(src)) ++est.successes;
    }
    est.freq = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.tolerance = hoeffding_tolerance(trials, delta);
    est.confidence = 1.0 - delta;
    return est;
}

nlohmann::json estimate_to_json(const Estimate& e);

/// Names and constants of the generator, for reports.
nlohmann::json rng_spec_json();

} // namespace errcred
