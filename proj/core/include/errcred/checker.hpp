#pragma once

// Validation of error-bound claims.
//
// exact_bound is the ground truth every other check is compared against.
// validate_schedule symbolically runs every trace of a program while
// threading a credit balance through annotated sampling sites; it accepts
// when every trace either reaches a value satisfying the postcondition or
// holds a full credit. validate_amplification does the same for one
// iteration of a retry loop, where a failed iteration must leave the
// credit amplified by k.

#include "errcred/credits.hpp"
#include "errcred/postcondition.hpp"
#include "errcred/semantics.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace errcred {

class CheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (site, outcome) pairs in the order they were drawn.
using Trace = std::vector<std::pair<int, std::uint64_t>>;

/// A table that applies at `site` only on traces that drew the listed
/// outcomes at earlier sites.
struct GuardedTable {
    int site = -1;
    std::map<int, std::uint64_t> when;
    Err2Table table;
};

struct CreditSchedule {
    Rat initial;
    std::map<int, Err2Table> site_tables;
    std::vector<GuardedTable> guarded_tables;

    /// First guarded table whose guard holds on `trace`, else the plain
    /// site table, else null.
    const Err2Table* lookup(int site, const Trace& trace) const;

    static CreditSchedule from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct AmpCertificate {
    Rat k;
    CreditSchedule body_schedule;
    Postcondition success_post;

    static AmpCertificate from_json(const nlohmann::json& j);
};

struct Verdict {
    bool accepted = false;
    std::string reason;
    Trace trace;
    Rat credit;
    std::uint64_t traces = 0;
    std::optional<unsigned> certified_depth;
};

struct CheckLimits {
    std::uint64_t steps_per_trace = 100'000;
    std::uint64_t total_traces = 1'000'000;
};

BoundResult exact_bound(const ExprPtr& e, const Postcondition& post, Mode mode, std::size_t depth,
                        std::size_t frontier_limit = kDefaultFrontierLimit);

Verdict validate_schedule(const ExprPtr& e, const CreditSchedule& s, const Postcondition& post,
                          Mode mode, const CheckLimits& limits = {});

Verdict validate_amplification(const ExprPtr& body, const AmpCertificate& cert, const Rat& eps0,
                               const CheckLimits& limits = {});

/// ((M - N) / (M + 1))^n.
Rat tail_bound(std::uint64_t M, std::uint64_t N, unsigned n);

/// n / (n + k + 1).
Rat spline_bound(std::uint64_t n, std::uint64_t k);

/// Total-mode upper bound at each requested depth (computed incrementally).
std::vector<std::pair<std::size_t, Rat>> ast_evidence(const ExprPtr& e, const Postcondition& post,
                                                      std::vector<std::size_t> depths,
                                                      std::size_t frontier_limit = kDefaultFrontierLimit);

} // namespace errcred
