// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "errcred/casestudies.hpp"
#include "errcred/checker.hpp"
#include "errcred/credits.hpp"
#include "errcred/datastructures.hpp"
#include "errcred/json_io.hpp"
#include "errcred/montecarlo.hpp"
#include "errcred/parser.hpp"
#include "errcred/semantics.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace errcred;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail << "violated: " << what << "; ";
        ok = ok && cond;
    }
};

std::string source_path(const std::string& rel) { return std::string(ERRCRED_SOURCE_DIR) + "/" + rel; }

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail << "exception: " << e.what() << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= limit_s) {
        c.ok = false;
        c.detail << "time limit " << limit_s << " s exceeded; ";
    }
    if (!c.ok) ++failures;
    std::printf("criterion %2d: %s  %s (%.2f s / %.0f s)  %s\n", id, c.ok ? "PASS" : "FAIL", title, secs, limit_s,
                c.detail.str().c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    criterion(1, "two-coins distribution", 1, [](Check& c) {
        const ExprPtr e = parse_file(source_path("corpus/two_coins.eris"));
        Executor ex(Config::initial(e));
        for (std::size_t d = 0; d <= 32; ++d, ex.advance()) {
            if (d < 6) continue;
            const ExecResult r = ex.snapshot();
            const std::string at = " at depth " + std::to_string(d);
            c.require(r.values.size() == 1 && r.values.weight(Val(parse_expr("42"))) == Rat(1, 4), "{42 -> 1/4}" + at);
            c.require(r.residual_mass == Rat(3, 4), "residual 3/4" + at);
            c.require(r.stuck_mass.is_zero(), "stuck 0" + at);
        }
        c.detail << "depths 6..32 checked";
    });

    criterion(2, "fig1 brackets", 1, [](Check& c) {
        const ExprPtr e = parse_file(source_path("corpus/fig1.eris"));
        const Postcondition post = fig1_post();
        Executor ex(Config::initial(e));
        std::size_t first_bad = 0, last_bad = 0;
        for (std::size_t d = 0; d <= 32; ++d, ex.advance()) {
            if (d < 8) continue;
            const ExecResult r = ex.snapshot();
            const bool good = bracket(r, post, Mode::Partial).lower == Rat(1, 4) &&
                              bracket(r, post, Mode::Total).upper == Rat(3, 8) && r.residual_mass == Rat(1, 8);
            if (!good) {
                if (!first_bad) first_bad = d;
                last_bad = d;
            }
        }
        c.require(first_bad == 0, "lower 1/4, upper 3/8, divergence 1/8 at depths " + std::to_string(first_bad) +
                                      ".." + std::to_string(last_bad) + " (reached from depth " +
                                      std::to_string(last_bad + 1) + " on)");
        c.detail << "depths 8..32 checked";
    });

    criterion(3, "fig1 schedule", 1, [](Check& c) {
        const ExprPtr e = parse_file(source_path("corpus/fig1.eris"));
        c.require(validate_schedule(e, fig1_schedule(Rat(1, 4)), fig1_post(), Mode::Partial).accepted,
                  "initial 1/4 accepted");
        c.require(!validate_schedule(e, fig1_schedule(Rat(1, 4) - Rat(1, 1000)), fig1_post(), Mode::Partial).accepted,
                  "initial 1/4 - 1/1000 rejected");
    });

    criterion(4, "tail bounds", 30, [](Check& c) {
        int cases = 0;
        for (std::uint64_t M = 1; M <= 4; ++M)
            for (std::uint64_t N = 0; N < M; ++N)
                for (unsigned n = 0; n <= 6; ++n, ++cases)
                    c.require(tail_bound(M, N, n) == exact_total_error(build_rsamp_bd(M, N, n), rsamp_bd_post()),
                              "M=" + std::to_string(M) + " N=" + std::to_string(N) + " n=" + std::to_string(n));
        c.detail << cases << " grid points";
    });

    criterion(5, "amplification", 30, [](Check& c) {
        for (const Rat& eps0 : {Rat(1, 2), Rat(1, 8), Rat(1, 100)}) {
            const Verdict v = validate_amplification(build_uniform_body(3, 1), uniform_certificate(3, 1, 2), eps0);
            c.require(v.accepted, "certificate accepted at eps0 " + eps0.str());
            const unsigned d = amp_depth(eps0, 2);
            const Rat err = exact_total_error(build_rsamp_bd(3, 1, d), rsamp_bd_post());
            c.require(err <= eps0, "truncation error at eps0 " + eps0.str());
            c.detail << "eps0 " << eps0 << ": depth " << d << ", error " << err << "; ";
        }
    });

    criterion(6, "planner constants", 5, [](Check& c) {
        for (std::uint64_t N = 1; N <= 5; ++N)
            for (unsigned L = 1; L <= 6; ++L) {
                const PlannerConstants pc = planner_constants(N, L);
                const Rat span = Rat(N + 1).pow(L) - Rat(1);
                c.require(pc.ec_amp == Rat(1) + Rat(1) / span, "ecAmp closed form");
                const Rat eps(1, 7);
                for (unsigned i = 0; i < L; ++i) {
                    c.require(pc.ec_amp >= pc.ec_rem[i] + pc.ec_exc, "ecAmp >= ecRem(i) + ecExc");
                    for (std::uint64_t letter = 0; letter <= N; ++letter) {
                        std::vector<std::uint64_t> w(L, 0);
                        w[i] = letter;
                        Rat sum;
                        for (std::uint64_t ch = 0; ch <= N; ++ch) sum += planner_D(pc, eps, i, ch, w);
                        c.require(sum == Rat(N + 1) * pc.ec_rem[i] * eps, "mean preservation");
                    }
                }
            }
        c.detail << "N 1..5, L 1..6";
    });

    criterion(7, "spline", 10, [](Check& c) {
        for (std::uint64_t n = 1; n <= 3; ++n) {
            for (std::uint64_t k = 0; k < 6; ++k)
                c.require(spline_survival(n, k + 1) == Rat(n) / Rat(n + k + 1) && spline_bound(n, k) == Rat(n) / Rat(n + k + 1),
                          "survival n=" + std::to_string(n) + " k=" + std::to_string(k));
            std::vector<std::size_t> depths;
            for (std::size_t d = 0; d <= 120; ++d) depths.push_back(d);
            std::vector<Rat> distinct;
            Rat prev(1);
            for (const auto& [d, u] : ast_evidence(build_spline(n), Postcondition::truth(), depths)) {
                c.require(u <= prev, "ast evidence non-increasing");
                prev = u;
                if (distinct.empty() || distinct.back() != u) distinct.push_back(u);
            }
            c.require(distinct.size() >= 7, "at least six decay steps");
            for (std::size_t k = 0; k + 1 < distinct.size() && k < 6; ++k)
                c.require(distinct[k + 1] == spline_bound(n, k), "ast evidence matches n/(n+k+1)");
        }
    });

    criterion(8, "amortized hash", 5, [](Check& c) {
        int cases = 0;
        for (std::uint64_t n1 : {4, 8, 16}) {
            const std::uint64_t n = n1 - 1;
            for (std::uint64_t MAX = 1; MAX <= n1; ++MAX) {
                Rat sum_max;
                for (std::uint64_t i = 0; i < MAX; ++i) sum_max += Rat(i) / Rat(n1);
                c.require(amortized_hash_eps(n, MAX) * Rat(MAX) == sum_max, "eps_MAX * MAX equals the credit sum");
                for (std::uint64_t s = 0; s <= MAX; ++s, ++cases) {
                    Rat none(1), credit;
                    for (std::uint64_t i = 0; i < s; ++i) {
                        none *= Rat(1) - Rat(i) / Rat(n1);
                        credit += Rat(i) / Rat(n1);
                    }
                    c.require(birthday_collision(n, s) == Rat(1) - none, "birthday closed form");
                    c.require(Rat(1) - none <= credit, "collision <= credit");
                }
            }
        }
        // Cross-check the sampler itself by enumeration on the smallest table.
        const auto d = enumerate<bool>([](RandomSource& s) { return run_amortized_hash(3, 4, 4, s).collision; });
        c.require(d.at(true) == birthday_collision(3, 4), "enumerated collision probability");
        c.detail << cases << " (n, MAX, s) cases";
    });

    criterion(9, "resizing structures", 60, [](Check& c) {
        for (const auto& [V0, R0] : {std::pair<std::uint64_t, std::uint64_t>{8, 2}, {16, 4}}) {
            const LedgerReplay l = resizing_ledger_replay(V0, R0, 64);
            c.require(l.ok, "ledger (" + std::to_string(V0) + "," + std::to_string(R0) + "): " + l.detail);
            c.require(l.epochs >= 3, "at least 3 resize epochs");
            const Estimate est = estimate_host(
                [&](RandomSource& src) { return run_resizing_hash(V0, R0, 64, src).collision; }, 100'000, 9, 1e-3);
            const Rat claim = Rat(64) * resizing_hash_credit(V0, R0);
            c.require(est.freq <= claim.to_double() + est.tolerance, "collision frequency within bound");
            c.detail << "(" << V0 << "," << R0 << "): epochs " << l.epochs << ", freq " << est.freq << " vs bound "
                     << claim << "; ";
        }
    });

    criterion(10, "faulty vector", 60, [](Check& c) {
        for (const Rat& p : {Rat(1, 100), Rat(1, 50)})
            for (std::uint64_t m : {16, 32, 64}) {
                const Rat exact = vector_exact_failure(p, m);
                c.require(exact <= Rat(3) * p * Rat(m), "exact failure <= 3pm");
                const auto b = static_cast<std::uint64_t>(*p.den_i64());
                const Estimate est = estimate_host(
                    [&](RandomSource& src) { return run_faulty_vector(1, b, m, src).failed; }, 100'000, 10, 1e-3);
                c.require(std::abs(est.freq - exact.to_double()) <= est.tolerance, "frequency matches exact failure");
                c.detail << "p=" << p << " m=" << m << ": exact " << exact.to_double() << ", freq " << est.freq << "; ";
            }
    });

    criterion(11, "Merkle exhaustive soundness", 30, [](Check& c) {
        const MerkleExhaustive m = merkle_exhaustive(2, 2, default_leaves(2));
        const Rat budget = m.eps_max * Rat(2);
        c.require(m.honest_always_accepted, "honest proofs accepted");
        c.require(m.worst_forged_accept <= budget, "forged acceptance <= eps_MAX * height");
        c.detail << "V=2 h=2: forged " << m.worst_forged_accept << " <= " << budget << " (eps_MAX " << m.eps_max
                 << "); ";
        // Smallest instance with eps_MAX below 1.
        const MerkleExhaustive s = merkle_exhaustive(3, 1, default_leaves(1));
        c.require(s.honest_always_accepted, "honest proofs accepted (V=3, h=1)");
        c.require(s.worst_forged_accept_cf <= s.eps_max, "collision-free forged acceptance <= eps_MAX (V=3, h=1)");
        c.require(s.worst_accept_without_collision.is_zero(), "no forgery accepted without a collision");
        c.detail << "V=3 h=1: forged " << s.worst_forged_accept << ", on collision-free trees "
                 << s.worst_forged_accept_cf << " <= " << s.eps_max;
    });

    criterion(12, "Monte Carlo calibration", 120, [](Check& c) {
        const nlohmann::json manifest = read_json_file(source_path("corpus/manifest.json"));
        for (const auto& entry : manifest.at("programs")) {
            const ExprPtr e = parse_file(source_path(entry.at("file")));
            const Postcondition post = load_postcondition(source_path(entry.at("post")));
            const auto depth = entry.at("depth").get<std::size_t>();
            const BoundResult b = exact_bound(e, post, Mode::Total, depth);
            const Estimate est = estimate(e, post, 100'000, 12, depth, 1e-3);
            const double fail = est.failure_freq();
            const std::string name = entry.at("name");
            c.require(fail >= b.lower.to_double() - est.tolerance && fail <= b.upper.to_double() + est.tolerance,
                      name + " inside its bracket");
            const Estimate again = estimate(e, post, 1000, 12, depth, 1e-3);
            const Estimate first = estimate(e, post, 1000, 12, depth, 1e-3);
            c.require(again.successes == first.successes && again.stuck == first.stuck &&
                          again.exhausted == first.exhausted,
                      name + " reproducible");
            c.detail << name << " " << fail << " in [" << b.lower.to_double() << ", " << b.upper.to_double() << "]; ";
        }
    });

    criterion(13, "property suites", 120, [&](Check& c) {
        doctest::Context ctx;
        ctx.setOption("minimal", true);
        ctx.applyCommandLine(argc, argv);
        const int rc = ctx.run();
        c.require(rc == 0, "randomized properties");
        c.detail << "monad laws, conservation, monotonicity, nesting, composition, schedule soundness, round trips";
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
