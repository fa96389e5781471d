#pragma once

// The worked examples: object-language programs with their postconditions,
// schedules and claimed bounds, plus a registry that runs every case study
// (object-language or host-level) against its oracle.

#include "errcred/checker.hpp"
#include "errcred/postcondition.hpp"
#include "errcred/rat.hpp"
#include "errcred/syntax.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace errcred {

/// if flip && flip then 42 else diverge.
ExprPtr build_two_coins();
/// n <- rand 3; small n succeeds, otherwise k <- rand 1 decides between
/// success, failure and divergence.
ExprPtr build_fig1();
/// Retries rand M until the draw is <= N; returns the draw.
ExprPtr build_rsamp(std::uint64_t M, std::uint64_t N);
/// At most n tries; inr v on success, inl () when the tries run out.
ExprPtr build_rsamp_bd(std::uint64_t M, std::uint64_t N, std::uint64_t n);
/// Stops when rand n hits 0, otherwise continues from n + 1.
ExprPtr build_spline(std::uint64_t n0);
/// n <- rand K, then n iterations that each fault with probability a / b.
ExprPtr build_iter_demo(std::uint64_t K, std::uint64_t a, std::uint64_t b);
/// One iteration of the uniform rejection sampler: inr v on success, inl () to retry.
ExprPtr build_uniform_body(std::uint64_t M, std::uint64_t N);
/// One Poisson trial: a pair of coin flips, success iff both are 1.
ExprPtr build_poisson_body();

Postcondition two_coins_post();
Postcondition fig1_post();
Postcondition rsamp_bd_post();
Postcondition rsamp_post(std::uint64_t N);
Postcondition iter_demo_post();

/// Outer table [0,0,1/2,1/2]; after outer outcome 2 the inner site avoids
/// 1, after outcome 3 it avoids 0.
CreditSchedule fig1_schedule(const Rat& initial);

/// Table (M+1)/(M-N) on every rejected draw, entry credit 1.
AmpCertificate uniform_certificate(std::uint64_t M, std::uint64_t N, const Rat& k);
/// Planner tables for target word [1, 1], k = ecAmp(1, 2).
AmpCertificate poisson_certificate();

/// E[1 - (1 - eps)^n] for n uniform on {0..K}.
Rat iter_demo_exact(std::uint64_t K, const Rat& eps);

/// Probability that the spline from n0 survives its first `samples` draws,
/// by enumerating draw sequences.
Rat spline_survival(std::uint64_t n0, std::uint64_t samples);

/// Exact error of a surely terminating program (total mode, run to the end).
Rat exact_total_error(const ExprPtr& e, const Postcondition& post);

using CaseParams = std::map<std::string, std::string>;

std::vector<std::string> case_study_names();

/// Runs a case study. The result carries "observed", "claimed_bound",
/// "oracle", "pass" and, for sampled studies, "sampled": true.
nlohmann::json run_case_study(const std::string& name, const CaseParams& params, std::uint64_t seed);

} // namespace errcred
