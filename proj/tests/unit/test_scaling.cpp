#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/scaling.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <random>

using namespace inls;
using R64 = boost::rational<long long>;

namespace {

// Independent table of the exponents on long-long rationals.
struct Oracle {
    bool rho_inf;
    R64 rho, s, q, r, alpha, beta;
};

Oracle oracle(R64 p) {
    Oracle o{};
    if (p > 2) {
        o.rho_inf = true;
        o.s = 1 - R64(2) / p;
        o.q = (p * p + 2 * p) / 2;
        o.r = p + 2;
        o.alpha = (p * p + 2 * p) / (2 * p + 2);
        o.beta = (p + 2) / (p + 1);
    } else {
        o.rho_inf = false;
        o.rho = R64(4) / (4 - p);
        o.s = R64(1, 2);
        o.q = 2 * p + 4;
        o.r = (4 * p + 8) / p;
        o.alpha = (2 * p + 4) / (p + 1);
        o.beta = (4 * p + 8) / (3 * p + 8);
    }
    return o;
}

bool same(const Rational& a, R64 b) {
    return a == Rational(static_cast<long>(b.numerator()), static_cast<long>(b.denominator()));
}

}  // namespace

TEST_SUITE("scaling") {

TEST_CASE("profile at p = 4, 2, 1") {
    auto e4 = exponent_profile(Power(Rational(4)));
    CHECK(e4.rho.is_infinite());
    CHECK(e4.s == Rational(1, 2));
    CHECK(e4.q == 12);
    CHECK(e4.r == 6);
    CHECK(e4.alpha == Rational(12, 5));
    CHECK(e4.beta == Rational(6, 5));

    auto e2 = exponent_profile(Power(Rational(2)));
    CHECK(e2.rho == ExtRational(Rational(2)));
    CHECK(e2.s == Rational(1, 2));
    CHECK(e2.q == 8);
    CHECK(e2.r == 8);
    CHECK(e2.alpha == Rational(8, 3));
    CHECK(e2.beta == Rational(8, 7));

    auto e1 = exponent_profile(Power(Rational(1)));
    CHECK(e1.rho == ExtRational(Rational(4, 3)));
    CHECK(e1.q == 6);
    CHECK(e1.r == 12);
    CHECK(e1.alpha == Rational(3));
    CHECK(e1.beta == Rational(12, 11));
}

TEST_CASE("profile matches an independent rational oracle on k/10") {
    for (long k = 1; k <= 100; ++k) {
        const R64 p(k, 10);
        const auto e = exponent_profile(Power(Rational(k, 10)));
        const Oracle o = oracle(p);
        INFO("p = " << k << "/10");
        CHECK(e.rho.is_infinite() == o.rho_inf);
        if (!o.rho_inf) CHECK(same(e.rho.value(), o.rho));
        CHECK(same(e.s, o.s));
        CHECK(same(e.q, o.q));
        CHECK(same(e.r, o.r));
        CHECK(same(e.alpha, o.alpha));
        CHECK(same(e.beta, o.beta));
        CHECK(verify_identities(Power(Rational(k, 10))).all_pass());
    }
}

TEST_CASE("identities hold for random rationals") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(1, 2000), den(1, 997);
    for (int i = 0; i < 300; ++i) {
        const Power pw(Rational(num(rng), den(rng)));
        const Rational& p = pw.value();
        const auto e = exponent_profile(pw);
        const Rational inv_rho = e.rho.reciprocal();
        CHECK(2 / e.q + 2 / e.r == 1 - e.s);
        CHECK(1 / e.alpha == (p + 1) / e.q);
        CHECK(1 / e.beta == inv_rho + (p + 1) / e.r);
        CHECK(e.s > 0);
        CHECK(e.s < 1);
        CHECK(1 / e.q + 1 / e.r < Rational(1, 2));
    }
}

TEST_CASE("s jumps at p = 2") {
    // p <= 2 gives 1/2; the p > 2 branch tends to 0 from above.
    CHECK(exponent_profile(Power(Rational(2))).s == Rational(1, 2));
    CHECK(exponent_profile(Power(Rational(2001, 1000))).s == Rational(1, 2001));
}

TEST_CASE("admissible pairs") {
    using E = ExtRational;
    CHECK(is_admissible_pair({E::infinity(), E(2), 2}));
    CHECK_FALSE(is_admissible_pair({E(2), E::infinity(), 2}));
    CHECK(is_admissible_pair({E(4), E(4), 2}));
    CHECK_FALSE(is_admissible_pair({E(4), E(5), 2}));
    CHECK(is_admissible_pair({E(2), E(6), 3}));
    for (long k = 1; k <= 60; ++k) {
        const auto e = exponent_profile(Power(Rational(k, 6)));
        // (q, r) itself sits strictly below the sharp admissible line.
        CHECK_FALSE(is_admissible_pair({E(e.q), E(e.r), 2}));
    }
}

TEST_CASE("parsing") {
    CHECK(Power::parse("3/2").value() == Rational(3, 2));
    CHECK(Power::parse("0.25").value() == Rational(1, 4));
    CHECK(Power::parse("1e-1").value() == Rational(1, 10));
    CHECK(Power::parse(" 4 ").value() == 4);
    CHECK_THROWS_AS(Power::parse("0"), ValidationError);
    CHECK_THROWS_AS(Power::parse("-3"), ValidationError);
    CHECK_THROWS_AS(Power::parse("x"), ValidationError);
    CHECK_THROWS_AS(Power::parse("1/0"), ValidationError);
}

TEST_CASE("ExtRational reciprocal") {
    CHECK(ExtRational::infinity().reciprocal() == 0);
    CHECK(ExtRational(Rational(4, 3)).reciprocal() == Rational(3, 4));
    CHECK_THROWS(ExtRational(0L).reciprocal());
    CHECK(ExtRational::infinity().str() == "inf");
}

TEST_CASE("floating fallback agrees with the exact profile") {
    for (double p : {0.3, 1.0, 2.0, std::sqrt(2.0), 2.5, std::numbers::pi, 7.0}) {
        const auto e = exponent_profile_real(p);
        CHECK(std::abs(2 / e.q + 2 / e.r - (1 - e.s)) < 1e-12);
        CHECK(verify_identities_real(p).all_pass());
    }
    const auto exact = exponent_profile(Power(Rational(5, 2)));
    const auto real = exponent_profile_real(2.5);
    CHECK(real.q == doctest::Approx(exact.q.get_d()).epsilon(1e-15));
    CHECK(real.beta == doctest::Approx(exact.beta.get_d()).epsilon(1e-15));
    CHECK(std::isinf(real.rho));
}

}
