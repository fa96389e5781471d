#include "errcred/parser.hpp"
#include "errcred/syntax.hpp"

#include <doctest.h>

using namespace errcred;

namespace {

bool same(const ExprPtr& a, const ExprPtr& b) { return structurally_equal(a, b); }

} // namespace

TEST_CASE("parse: core forms") {
    CHECK(same(parse_expr("(rand 3)"), Expr::rand(Expr::integer(3))));
    CHECK(same(parse_expr("42"), Expr::integer(42)));
    CHECK(same(parse_expr("-7"), Expr::integer(-7)));
    CHECK(same(parse_expr("true"), Expr::boolean(true)));
    CHECK(same(parse_expr("()"), Expr::unit()));
    CHECK(same(parse_expr("(loc 3)"), Expr::loc(3)));
    CHECK(same(parse_expr("(label 1)"), Expr::label(1)));
    CHECK(same(parse_expr("(rec f x (f x))"),
               Expr::rec("f", "x", Expr::app(Expr::var("f"), Expr::var("x")))));
    CHECK(same(parse_expr("(+ 1 2)"), Expr::binop(BinOp::Add, Expr::integer(1), Expr::integer(2))));
    CHECK(same(parse_expr("(! (loc 0))"), Expr::load(Expr::loc(0))));
    CHECK(same(parse_expr("(load (loc 0))"), Expr::load(Expr::loc(0))));
    CHECK(same(parse_expr("(randlbl 2 (label 0))"), Expr::rand_lbl(Expr::integer(2), Expr::label(0))));
    CHECK(same(parse_expr("(match (inl 1) (inl a a) (inr b b))"),
               Expr::match(Expr::inl(Expr::integer(1)), "a", Expr::var("a"), "b", Expr::var("b"))));
}

TEST_CASE("parse: sugar disappears") {
    CHECK(same(parse_expr("(flip)"),
               Expr::binop(BinOp::Eq, Expr::rand(Expr::integer(1)), Expr::integer(1))));
    CHECK(same(parse_expr("(let x (rand 1) x)"),
               Expr::app(Expr::rec("_", "x", Expr::var("x")), Expr::rand(Expr::integer(1)))));
    CHECK(same(parse_expr("(lam x x)"), Expr::rec("_", "x", Expr::var("x"))));
    CHECK(same(parse_expr("(alloc 5)"), Expr::alloc_n(Expr::integer(1), Expr::integer(5))));
    CHECK(same(parse_expr("(seq 1 2)"), Expr::app(Expr::rec("_", "_", Expr::integer(2)), Expr::integer(1))));
    CHECK(same(parse_expr("(seq 1 2 3)"), parse_expr("(seq 1 (seq 2 3))")));
    CHECK(same(parse_expr("(f 1 2)"), Expr::app(Expr::app(Expr::var("f"), Expr::integer(1)), Expr::integer(2))));
}

TEST_CASE("parse: rand sites are numbered in preorder") {
    const ExprPtr e = parse_expr("(let n (rand 3) (if (<= n 1) true (rand 1)))");
    const auto sites = rand_sites(e);
    REQUIRE(sites.size() == 2);
    CHECK(print_expr(sites[0]) == "(rand 1)");
    CHECK(print_expr(sites[1]) == "(rand 3)");
}

TEST_CASE("parse: errors carry positions") {
    try {
        parse_expr("(if 1 2)");
        FAIL("expected an arity error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("arity mismatch") != std::string::npos);
        CHECK(e.line() == 1);
        CHECK(e.column() == 1);
    }
    try {
        parse_expr("(+ 1\n   (fst 1 2))");
        FAIL("expected an arity error on line 2");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_expr("(rand 3"), ParseError);
    CHECK_THROWS_AS(parse_expr("(rand 3))"), ParseError);
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    CHECK_THROWS_AS(parse_expr("(rec 1 x x)"), ParseError);
    CHECK_THROWS_AS(parse_expr("_"), ParseError);
    CHECK_THROWS_AS(parse_expr("99999999999999999999"), ParseError);
    CHECK_THROWS_AS(parse_expr("(loc -1)"), ParseError);
}

TEST_CASE("parse: comments and whitespace") {
    CHECK(same(parse_expr("; a comment\n (rand ; inline\n 3)"), parse_expr("(rand 3)")));
}

TEST_CASE("print: canonical forms") {
    CHECK(print_expr(Expr::integer(3)) == "3");
    CHECK(print_expr(Expr::rand(Expr::integer(3))) == "(rand 3)");
    CHECK(print_expr(parse_expr("(lam x x)")) == "(rec _ x x)");
    CHECK(print_expr(parse_expr("(pair (inl 1) (inr false))")) == "(pair (inl 1) (inr false))");
    CHECK(print_expr(parse_expr("(store (loc 1) ())")) == "(store (loc 1) ())");
}

TEST_CASE("subst") {
    const ExprPtr five = Expr::integer(5);
    CHECK(same(subst(Expr::var("x"), "x", five), five));
    const ExprPtr shadow = Expr::rec("f", "x", Expr::var("x"));
    CHECK(same(subst(shadow, "x", five), shadow));
    const ExprPtr fshadow = Expr::rec("x", "y", Expr::var("x"));
    CHECK(same(subst(fshadow, "x", five), fshadow));
    const ExprPtr sum = parse_expr("(+ x y)");
    CHECK(same(subst(sum, "x", Expr::integer(2)), parse_expr("(+ 2 y)")));
    const ExprPtr m = parse_expr("(match z (inl x x) (inr y x))");
    CHECK(same(subst(m, "x", five), parse_expr("(match z (inl x x) (inr y 5))")));
}

TEST_CASE("closedness") {
    CHECK(parse_expr("(rec f x (f x))")->closed());
    CHECK_FALSE(parse_expr("(+ x 1)")->closed());
    CHECK(has_recursion(parse_expr("(rec f x (f x))")));
    CHECK_FALSE(has_recursion(parse_expr("(let x 1 x)")));
}

TEST_CASE("keywords") {
    CHECK(is_keyword("rand"));
    CHECK(is_keyword("let"));
    CHECK(is_keyword("+"));
    CHECK_FALSE(is_keyword("x"));
}
