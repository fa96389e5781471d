#include "errcred/casestudies.hpp"
#include "errcred/checker.hpp"
#include "errcred/json_io.hpp"
#include "errcred/parser.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using namespace errcred;

namespace {

std::string source_path(const std::string& rel) { return std::string(ERRCRED_SOURCE_DIR) + "/" + rel; }

ExprPtr corpus(const std::string& name) { return parse_file(source_path("corpus/" + name + ".eris")); }

} // namespace

TEST_CASE("corpus programs equal the builders") {
    CHECK(structurally_equal(corpus("two_coins"), build_two_coins()));
    CHECK(structurally_equal(corpus("fig1"), build_fig1()));
    CHECK(structurally_equal(corpus("rsamp_bd_1_0_3"), build_rsamp_bd(1, 0, 3)));
    CHECK(structurally_equal(corpus("rsamp_1_0"), build_rsamp(1, 0)));
    CHECK(structurally_equal(corpus("spline_1"), build_spline(1)));
    CHECK(structurally_equal(corpus("iter_demo_2_half"), build_iter_demo(2, 1, 2)));
    CHECK(structurally_equal(corpus("uniform_body_3_1"), build_uniform_body(3, 1)));
    CHECK(structurally_equal(corpus("poisson_body"), build_poisson_body()));
}

TEST_CASE("every manifest entry parses, round-trips and has a bracket") {
    const nlohmann::json m = read_json_file(source_path("corpus/manifest.json"));
    REQUIRE(m.at("programs").size() >= 10);
    for (const auto& entry : m.at("programs")) {
        const ExprPtr e = parse_file(source_path(entry.at("file")));
        INFO(entry.at("name").get<std::string>());
        CHECK(structurally_equal(parse_expr(print_expr(e)), e));
        const Postcondition post = load_postcondition(source_path(entry.at("post")));
        const auto depth = entry.at("depth").get<std::size_t>();
        const BoundResult p = exact_bound(e, post, Mode::Partial, depth);
        const BoundResult t = exact_bound(e, post, Mode::Total, depth);
        CHECK(p.lower <= p.upper);
        CHECK(t.lower <= t.upper);
        CHECK(p.lower <= t.upper);
        CHECK(t.upper <= Rat(1));
    }
}

TEST_CASE("corpus schedules") {
    const auto check = [](const std::string& prog, const std::string& sched, const std::string& post, Mode mode) {
        return validate_schedule(corpus(prog), CreditSchedule::from_json(read_json_file(source_path("corpus/schedules/" + sched))),
                                 load_postcondition(source_path("corpus/posts/" + post)), mode)
            .accepted;
    };
    CHECK(check("fig1", "fig1.json", "eq_true.json", Mode::Partial));
    CHECK_FALSE(check("fig1", "fig1_short.json", "eq_true.json", Mode::Partial));
    CHECK(check("fig1", "fig1_total.json", "eq_true.json", Mode::Total));

    const auto amp = [](const std::string& cert, const Rat& eps0) {
        return validate_amplification(corpus(cert == "poisson_k4_3.json" ? "poisson_body" : "uniform_body_3_1"),
                                      AmpCertificate::from_json(read_json_file(source_path("corpus/schedules/" + cert))), eps0);
    };
    const Verdict u = amp("uniform_3_1_k2.json", Rat(1, 100));
    CHECK(u.accepted);
    REQUIRE(u.certified_depth);
    CHECK(*u.certified_depth == 7);
    CHECK_FALSE(amp("uniform_3_1_k3.json", Rat(1, 100)).accepted);
    CHECK(amp("poisson_k4_3.json", Rat(1, 2)).accepted);
}
