#include "errcred/casestudies.hpp"
#include "errcred/checker.hpp"
#include "errcred/parser.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using namespace errcred;
using P = Postcondition;

namespace {

CreditSchedule single(const Rat& initial, int site, Err2Table t) {
    CreditSchedule s;
    s.initial = initial;
    s.site_tables.emplace(site, std::move(t));
    return s;
}

} // namespace

TEST_CASE("postconditions are total") {
    const P p = P::is_pair(P::cmp(P::CmpOp::Lt, 3), P::truth());
    CHECK(p.holds(*parse_expr("(pair 1 ())")));
    CHECK_FALSE(p.holds(*parse_expr("(pair 5 ())")));
    CHECK_FALSE(p.holds(*parse_expr("7")));
    CHECK_FALSE(P::cmp(P::CmpOp::Le, 0).holds(*parse_expr("true")));
    CHECK(P::in({parse_expr("1"), parse_expr("(inl 2)")}).holds(*parse_expr("(inl 2)")));
    CHECK(P::negate(P::eq(parse_expr("1"))).holds(*parse_expr("2")));
    CHECK(P::any({P::is_inl(P::truth()), P::is_inr(P::eq(parse_expr("0")))}).holds(*parse_expr("(inr 0)")));
    CHECK_FALSE(P::all({P::truth(), P::is_inl(P::truth())}).holds(*parse_expr("(inr 0)")));
    const P round = P::from_json(p.to_json());
    CHECK(round.holds(*parse_expr("(pair 2 5)")));
    CHECK_FALSE(round.holds(*parse_expr("(pair 3 5)")));
    CHECK(P::from_json(nlohmann::json::parse(R"j({"kind": "eq", "value": "(pair 1 true)"})j"))
              .holds(*parse_expr("(pair 1 true)")));
    CHECK_THROWS(P::from_json(nlohmann::json::parse(R"({"kind": "bogus"})")));
}

TEST_CASE("exact_bound matches the brackets") {
    const BoundResult p = exact_bound(build_fig1(), fig1_post(), Mode::Partial, 16);
    CHECK(p.lower == Rat(1, 4));
    const BoundResult t = exact_bound(build_fig1(), fig1_post(), Mode::Total, 16);
    CHECK(t.upper == Rat(3, 8));
    // Spline from 1, after two samples: survival (1/2)(2/3).
    const auto ev = ast_evidence(build_spline(1), P::truth(), {200});
    CHECK(ev.front().second < Rat(1, 3));
}

TEST_CASE("validate_schedule: fig1") {
    const Verdict ok = validate_schedule(build_fig1(), fig1_schedule(Rat(1, 4)), fig1_post(), Mode::Partial);
    CHECK(ok.accepted);
    const Verdict low = validate_schedule(build_fig1(), fig1_schedule(Rat(1, 5)), fig1_post(), Mode::Partial);
    CHECK_FALSE(low.accepted);
    CHECK(low.reason.find("insufficient") != std::string::npos);
    // Partial-mode schedule does not cover divergence in total mode.
    const Verdict total = validate_schedule(build_fig1(), fig1_schedule(Rat(1, 4)), fig1_post(), Mode::Total);
    CHECK_FALSE(total.accepted);
    CHECK_FALSE(total.trace.empty());
}

TEST_CASE("validate_schedule: single coin") {
    const Verdict v = validate_schedule(parse_expr("(rand 1)"), single(Rat(1, 2), 0, Err2Table(1, std::vector<Rat>{0, 1})),
                                        P::eq(parse_expr("0")), Mode::Partial);
    CHECK(v.accepted);
    const Verdict w = validate_schedule(parse_expr("(rand 1)"), single(Rat(1, 2), 0, Err2Table(1, std::vector<Rat>{1, 0})),
                                        P::eq(parse_expr("0")), Mode::Partial);
    CHECK_FALSE(w.accepted);
    REQUIRE(w.trace.size() == 1);
    CHECK(w.trace[0] == std::pair<int, std::uint64_t>{0, 1});
}

TEST_CASE("validate_schedule: static errors") {
    CHECK_THROWS_AS(validate_schedule(parse_expr("(rand 1)"), single(Rat(1, 2), 3, Err2Table(1)), P::truth(), Mode::Partial),
                    CheckError);
    CHECK_THROWS_AS(validate_schedule(parse_expr("(rand 1)"), single(Rat(1, 2), 0, Err2Table(2)), P::truth(), Mode::Partial),
                    CheckError);
    // A sampling loop that never stops exhausts the trace limit.
    CHECK_THROWS_AS(validate_schedule(build_spline(1), CreditSchedule{}, P::truth(), Mode::Partial, CheckLimits{2000, 1000}),
                    CheckError);
}

TEST_CASE("validate_schedule: a site firing twice is rejected") {
    const ExprPtr e = parse_expr("((rec f n (if (<= n 0) 0 (+ (rand 1) (f (- n 1))))) 2)");
    const Verdict v = validate_schedule(e, single(Rat(1, 2), 0, Err2Table(1, std::vector<Rat>{0, 1})),
                                        P::cmp(P::CmpOp::Le, 0), Mode::Partial);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason.find("twice") != std::string::npos);
}

TEST_CASE("schedule JSON round trip") {
    const CreditSchedule s = fig1_schedule(Rat(1, 4));
    const CreditSchedule t = CreditSchedule::from_json(s.to_json());
    CHECK(t.initial == s.initial);
    CHECK(t.site_tables == s.site_tables);
    CHECK(t.guarded_tables.size() == 2);
    CHECK(validate_schedule(build_fig1(), t, fig1_post(), Mode::Partial).accepted);
}

TEST_CASE("validate_amplification") {
    const Verdict ok = validate_amplification(build_uniform_body(3, 1), uniform_certificate(3, 1, 2), Rat(1, 100));
    CHECK(ok.accepted);
    REQUIRE(ok.certified_depth);
    CHECK(*ok.certified_depth == amp_depth(Rat(1, 100), 2));
    const Verdict bad = validate_amplification(build_uniform_body(3, 1), uniform_certificate(3, 1, 3), Rat(1, 100));
    CHECK_FALSE(bad.accepted);
    const Verdict poisson = validate_amplification(build_poisson_body(), poisson_certificate(), Rat(1, 2));
    CHECK(poisson.accepted);
    CHECK(poisson_certificate().k == Rat(4, 3));
    CHECK_THROWS_AS(validate_amplification(build_uniform_body(3, 1), uniform_certificate(3, 1, 1), Rat(1, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_amplification(build_uniform_body(3, 1), uniform_certificate(3, 1, 2), Rat(0)),
                    std::invalid_argument);
}

TEST_CASE("tail_bound") {
    CHECK(tail_bound(1, 0, 3) == Rat(1, 8));
    CHECK(tail_bound(3, 1, 1) == Rat(1, 2));
    CHECK(tail_bound(4, 2, 0) == Rat(1));
    CHECK_THROWS_AS(tail_bound(1, 1, 2), std::invalid_argument);
    CHECK(exact_total_error(build_rsamp_bd(1, 0, 3), rsamp_bd_post()) == Rat(1, 8));
    CHECK(exact_total_error(build_rsamp_bd(3, 1, 1), rsamp_bd_post()) == Rat(1, 2));
    CHECK(exact_total_error(build_rsamp_bd(2, 0, 0), rsamp_bd_post()) == Rat(1));
}

TEST_CASE("spline_bound") {
    CHECK(spline_bound(1, 1) == Rat(1, 3));
    CHECK(spline_survival(1, 2) == Rat(1, 2) * Rat(2, 3));
    for (std::uint64_t n = 1; n <= 6; ++n) {
        CHECK(spline_bound(n, 0) == Rat(n) / Rat(n + 1));
        for (std::uint64_t k = 0; k <= 6; ++k) CHECK(spline_bound(n, k + 1) < spline_bound(n, k));
    }
    CHECK(Rat(1) - spline_survival(3, 1) == Rat(1, 4));
    CHECK_THROWS_AS(spline_bound(0, 1), std::invalid_argument);
}

TEST_CASE("ast_evidence") {
    // Unbounded sampler: the total upper bound halves with every try.
    const auto ev = ast_evidence(build_rsamp(1, 0), rsamp_post(0), {0, 10, 20, 40, 80});
    for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i].second <= ev[i - 1].second);
    CHECK(ev.front().second == Rat(1));
    std::vector<std::size_t> depths;
    for (std::size_t d = 0; d <= 120; ++d) depths.push_back(d);
    std::vector<Rat> distinct;
    for (const auto& [d, u] : ast_evidence(build_rsamp(1, 0), rsamp_post(0), depths))
        if (distinct.empty() || distinct.back() != u) distinct.push_back(u);
    REQUIRE(distinct.size() >= 5);
    for (std::size_t i = 0; i < distinct.size(); ++i) CHECK(distinct[i] == Rat(1, 2).pow(static_cast<unsigned>(i)));

    // A straight-line program reaches its exact error and stays there.
    const auto flat = ast_evidence(parse_expr("(rand 3)"), P::cmp(P::CmpOp::Le, 0), {5, 10, 20});
    for (const auto& [d, u] : flat) CHECK(u == Rat(3, 4));
}
