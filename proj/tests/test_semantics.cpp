#include "errcred/casestudies.hpp"
#include "errcred/parser.hpp"
#include "errcred/postcondition.hpp"
#include "errcred/semantics.hpp"

#include <doctest.h>

using namespace errcred;

namespace {

Config cfg(const std::string& text) { return Config::initial(parse_expr(text)); }

Config with_state(const std::string& text, State s) {
    return Config{parse_expr(text), std::make_shared<const State>(std::move(s))};
}

Val val(const std::string& text) { return Val(parse_expr(text)); }

} // namespace

TEST_CASE("classify") {
    CHECK(classify(cfg("42")) == Class::Value);
    CHECK(classify(cfg("(rand 3)")) == Class::Reducible);
    CHECK(classify(cfg("(! (loc 0))")) == Class::Stuck);
    CHECK(classify(cfg("(+ 1 true)")) == Class::Stuck);
    CHECK(classify(cfg("(rand -1)")) == Class::Stuck);
    CHECK(classify(cfg("(rand true)")) == Class::Stuck);
    CHECK(classify(cfg("(if 1 2 3)")) == Class::Stuck);
    CHECK(classify(cfg("(fst 1)")) == Class::Stuck);
    CHECK(classify(cfg("(allocN 0 1)")) == Class::Stuck);
    CHECK(classify(cfg("(randlbl 1 (label 0))")) == Class::Stuck);
    CHECK(classify(cfg("x")) == Class::Stuck);
}

TEST_CASE("step: rand is uniform") {
    const auto d = step(cfg("(rand 3)"));
    CHECK(d.size() == 4);
    CHECK(mass(d) == Rat(1));
    for (int i = 0; i <= 3; ++i) CHECK(d.weight(Config::initial(Expr::integer(i))) == Rat(1, 4));
    const auto zero = step(cfg("(rand 0)"));
    CHECK(zero.size() == 1);
    CHECK(zero.weight(Config::initial(Expr::integer(0))) == Rat(1));
}

TEST_CASE("step: deterministic redexes") {
    CHECK(step(cfg("(if true 1 2)")) == dret<Config, ConfigLess>(cfg("1")));
    CHECK(step(cfg("(if false 1 2)")) == dret<Config, ConfigLess>(cfg("2")));
    CHECK(step(cfg("(+ 2 3)")) == dret<Config, ConfigLess>(cfg("5")));
    CHECK(step(cfg("((rec f x x) 7)")) == dret<Config, ConfigLess>(cfg("7")));
    CHECK(step(cfg("(! (loc 0))")).empty());
    CHECK(step(cfg("42")).empty());
}

TEST_CASE("step: mass is 1 exactly on reducible configurations") {
    for (const char* t : {"(rand 2)", "(+ 1 2)", "(fst (pair 1 2))", "(alloc 3)", "(alloctape 4)", "42", "(! (loc 9))",
                          "(pair (rand 1) (rand 2))", "(= (rec f x x) 1)"}) {
        const Config c = cfg(t);
        CHECK_MESSAGE(mass(step(c)) == (classify(c) == Class::Reducible ? Rat(1) : Rat(0)), t);
    }
}

TEST_CASE("evaluation order: the argument before the function") {
    // The function position is stuck, so the argument's rand must fire first.
    const ExprPtr e = parse_expr("((! (loc 0)) (rand 1))");
    const auto d = step(Config::initial(e));
    CHECK(d.size() == 2);
    // Pairs evaluate their right component first.
    const Stepped r = reduce(cfg("(pair (rand 1) (rand 2))"));
    REQUIRE(r.tag == Stepped::Tag::Rand);
    CHECK(r.bound == 2);
}

TEST_CASE("heap: allocation, load, store, offsets") {
    const ExecResult r = exec_n(cfg("(let l (allocN 3 7) (seq (store (+ l 2) 9) (pair (! l) (! (+ l 2)))))"), 64);
    CHECK(r.values.weight(val("(pair 7 9)")) == Rat(1));
    const ExecResult oob = exec_n(cfg("(let l (allocN 2 0) (! (+ l 2)))"), 64);
    CHECK(oob.stuck_mass == Rat(1));
}

TEST_CASE("state_step appends a uniform sample") {
    State s;
    s.tapes[0] = Tape{1, {}};
    s.next_label = 1;
    const auto d = state_step(0, s);
    CHECK(d.size() == 2);
    CHECK(mass(d) == Rat(1));
    for (std::uint64_t v : {0u, 1u}) {
        State t = s;
        t.tapes[0].queue = {v};
        CHECK(d.weight(std::make_shared<const State>(t)) == Rat(1, 2));
    }
    State z;
    z.tapes[0] = Tape{0, {}};
    z.next_label = 1;
    const auto dz = state_step(0, z);
    CHECK(dz.size() == 1);
    CHECK(mass(dz) == Rat(1));
    CHECK_THROWS_AS(state_step(5, s), std::invalid_argument);
}

TEST_CASE("labelled rand consumes a presampled queue deterministically") {
    State s;
    s.tapes[0] = Tape{2, {1, 0, 2}};
    s.next_label = 1;
    const Config c = with_state("(let a (randlbl 2 (label 0)) (let b (randlbl 2 (label 0)) "
                                "(let c (randlbl 2 (label 0)) (pair a (pair b c)))))",
                                s);
    const ExecResult r = exec_n(c, 64);
    CHECK(r.values.size() == 1);
    CHECK(r.values.weight(val("(pair 1 (pair 0 2))")) == Rat(1));

    // A bound mismatch ignores the tape.
    const ExecResult m = exec_n(with_state("(randlbl 1 (label 0))", s), 4);
    CHECK(m.values.size() == 2);
    // An empty queue behaves like plain rand.
    State e;
    e.tapes[0] = Tape{2, {}};
    e.next_label = 1;
    CHECK(exec_n(with_state("(randlbl 2 (label 0))", e), 4).values.size() == 3);
}

TEST_CASE("exec_n: two coins") {
    const ExecResult r = exec_n(Config::initial(build_two_coins()), 32);
    CHECK(r.values.size() == 1);
    CHECK(r.values.weight(val("42")) == Rat(1, 4));
    CHECK(r.residual_mass == Rat(3, 4));
    CHECK(r.stuck_mass == Rat(0));
}

TEST_CASE("exec_n: fig1-style program") {
    const ExecResult r = exec_n(Config::initial(build_fig1()), 16);
    CHECK(r.values.weight(val("true")) == Rat(5, 8));
    CHECK(r.values.weight(val("false")) == Rat(2, 8));
    CHECK(r.residual_mass == Rat(1, 8));
}

TEST_CASE("exec_0 of a non-value is all residual") {
    for (const char* t : {"(rand 3)", "(! (loc 0))", "(+ 1 2)"}) {
        const ExecResult r = exec_n(cfg(t), 0);
        CHECK(r.residual_mass == Rat(1));
        CHECK(r.values.empty());
    }
    const ExecResult v = exec_n(cfg("5"), 0);
    CHECK(v.values.weight(val("5")) == Rat(1));
}

TEST_CASE("brackets") {
    const ExprPtr f1 = build_fig1();
    const BoundResult p = exec_bracket(Config::initial(f1), fig1_post(), Mode::Partial, 16);
    CHECK(p.lower == Rat(1, 4));
    CHECK(p.upper == Rat(3, 8));
    const BoundResult t = exec_bracket(Config::initial(f1), fig1_post(), Mode::Total, 16);
    CHECK(t.upper == Rat(3, 8));
    const BoundResult two = exec_bracket(Config::initial(build_two_coins()), two_coins_post(), Mode::Total, 32);
    CHECK(two.upper == Rat(3, 4));
    const BoundResult stuck = exec_bracket(cfg("(! (loc 0))"), Postcondition::truth(), Mode::Partial, 4);
    CHECK(stuck.lower == Rat(1));
}

TEST_CASE("frontier limit is a reported error") {
    const ExprPtr wide = parse_expr("(+ (rand 999) (+ (rand 999) (rand 999)))");
    try {
        exec_n(Config::initial(wide), 10, 5000);
        FAIL("expected a resource error");
    } catch (const ResourceError& e) {
        CHECK(e.depth() <= 10);
    }
}

TEST_CASE("modes") {
    CHECK(parse_mode("partial") == Mode::Partial);
    CHECK(parse_mode("total") == Mode::Total);
    CHECK_THROWS_AS(parse_mode("both"), std::invalid_argument);
    CHECK(std::string(mode_name(Mode::Total)) == "total");
}
