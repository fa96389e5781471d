#include "errcred/distr.hpp"
#include "errcred/rat.hpp"

#include <doctest.h>

using namespace errcred;

TEST_CASE("rat: canonical form and exact arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(2, 4).num() == 1);
    CHECK(Rat(2, 4).den() == 2);
    CHECK(Rat(1, -2) == Rat(-1, 2));
    CHECK(Rat::parse("6/8") == Rat(3, 4));
    CHECK(Rat::parse("-5") == Rat(-5));
    CHECK((Rat(1, 3) + Rat(1, 6)).str() == "1/2");
    CHECK(Rat(3, 2).pow(3) == Rat(27, 8));
    CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("x"), std::invalid_argument);
    CHECK_THROWS(Rat(1) / Rat(0));
}

TEST_CASE("dret is a point mass") {
    const auto d = dret(7LL);
    CHECK(d.size() == 1);
    CHECK(d.weight(7) == Rat(1));
    CHECK(mass(d) == Rat(1));
}

TEST_CASE("zero weights are never stored") {
    Distr<int> d;
    d.add(1, Rat(0));
    CHECK(d.empty());
    CHECK(mass(d) == Rat(0));
}

TEST_CASE("dbind: parity of a uniform draw") {
    const auto mu = uniform_upto(3);
    const auto parity = dbind(mu, [](long long i) { return dret(i % 2); });
    // Oracle: sum over the four outcomes by hand.
    Rat even, odd;
    for (long long i = 0; i <= 3; ++i) (i % 2 == 0 ? even : odd) += Rat(1, 4);
    CHECK(parity.weight(0) == even);
    CHECK(parity.weight(1) == odd);
    CHECK(even == Rat(1, 2));
}

TEST_CASE("dbind: identities") {
    const auto mu = uniform_upto(4);
    CHECK(dbind(mu, [](long long x) { return dret(x); }) == mu);
    const auto f = [](long long x) { return uniform_upto(x); };
    CHECK(dbind(dret(3LL), f) == f(3));
}

TEST_CASE("mass, restrict, pr") {
    Distr<char> d;
    d.add('a', Rat(1, 4));
    d.add('b', Rat(1, 4));
    CHECK(mass(d) == Rat(1, 2));
    CHECK(mass(Distr<int>{}) == Rat(0));

    Distr<int> h;
    h.add(0, Rat(1, 2));
    h.add(1, Rat(1, 2));
    const auto even = restrict(h, [](int x) { return x % 2 == 0; });
    CHECK(even.size() == 1);
    CHECK(even.weight(0) == Rat(1, 2));
    CHECK(restrict(h, [](int) { return true; }) == h);

    const auto mu = uniform_upto(3);
    // Oracle: outcomes 0 and 1 of four.
    CHECK(pr(mu, [](long long x) { return x <= 1; }) == Rat(2, 4));
    CHECK(pr(mu, [](long long) { return false; }) == Rat(0));
    CHECK(pr(mu, [](long long x) { return x == 2; }) + pr(mu, [](long long x) { return x != 2; }) == mass(mu));
}

TEST_CASE("expectation") {
    const Rat eps(1, 10);
    for (long long K = 0; K <= 6; ++K) {
        const auto mu = uniform_upto(K);
        CHECK(expectation(mu, [&](long long n) { return Rat(n) * eps; }) == eps * Rat(K) / Rat(2));
    }
    CHECK(expectation(dret(5LL), [](long long x) { return Rat(x) * Rat(2); }) == Rat(10));
    const std::vector<Rat> err2{0, 0, Rat(1, 2), Rat(1, 2)};
    CHECK(expectation(uniform_upto(3), [&](long long i) { return err2[i]; }) == Rat(1, 4));
}

TEST_CASE("pgl") {
    const auto mu = uniform_upto(3);
    CHECK(pgl(mu, Rat(1, 4), [](long long x) { return x != 2; }));
    CHECK_FALSE(pgl(mu, Rat(1, 5), [](long long x) { return x != 2; }));
    CHECK(pgl(mu, Rat(1), [](long long) { return false; }));
    CHECK(pgl(dret(1LL), Rat(0), [](long long x) { return x == 1; }));
    CHECK_FALSE(pgl(dret(1LL), Rat(0), [](long long x) { return x == 2; }));
    CHECK_THROWS_AS(pgl(mu, Rat(-1), [](long long) { return true; }), std::invalid_argument);
}
