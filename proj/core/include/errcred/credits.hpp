#pragma once

// Error-credit arithmetic and the closed-form constants built on it.

#include "errcred/rat.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace errcred {

/// A non-negative amount of error credit. Amounts of one or more are kept,
/// not rejected: holding them is what discharges a branch.
class Credit {
public:
    Credit() = default;
    explicit Credit(Rat amount);

    const Rat& amount() const { return amount_; }

    friend bool operator==(const Credit&, const Credit&) = default;

private:
    Rat amount_;
};

/// Splits off `part`; returns (part, rest). Throws if part exceeds the amount.
std::pair<Credit, Credit> split(const Credit& c, const Rat& part);
Credit join(const Credit& a, const Credit& b);
Credit weaken(const Credit& c, const Rat& to);
bool check_contradiction(const Credit& c);

/// Per-outcome credit assignment for a sampler over {0..bound}.
class Err2Table {
public:
    Err2Table() = default;
    explicit Err2Table(std::uint64_t bound, std::map<std::uint64_t, Rat> entries = {});
    Err2Table(std::uint64_t bound, const std::vector<Rat>& dense);

    std::uint64_t bound() const { return bound_; }
    const std::map<std::uint64_t, Rat>& entries() const { return entries_; }
    Rat at(std::uint64_t outcome) const;

    static Err2Table from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    friend bool operator==(const Err2Table&, const Err2Table&) = default;

private:
    std::uint64_t bound_ = 0;
    std::map<std::uint64_t, Rat> entries_;
};

/// Mean of the table under the uniform distribution on {0..bound}.
Rat rand_exp_mean(const Err2Table& t);

/// Credit needed to avoid every outcome in xs: |xs| / (N + 1).
Rat err_list_credit(const std::set<std::uint64_t>& xs, std::uint64_t N);

/// Smallest d with eps * k^d >= 1.
unsigned amp_depth(const Rat& eps, const Rat& k);

struct PlannerConstants {
    std::uint64_t N = 0;
    unsigned L = 0;
    Rat ec_amp;
    std::vector<Rat> ec_rem;
    Rat ec_exc;
};

PlannerConstants planner_constants(std::uint64_t N, unsigned L);

/// Credit after drawing `c` at position i while aiming for word w.
Rat planner_D(const PlannerConstants& pc, const Rat& eps, unsigned i, std::uint64_t c,
              const std::vector<std::uint64_t>& w);

/// Table of planner_D over all outcomes at position i.
Err2Table planner_table(const PlannerConstants& pc, const Rat& eps, unsigned i,
                        const std::vector<std::uint64_t>& w);

} // namespace errcred
