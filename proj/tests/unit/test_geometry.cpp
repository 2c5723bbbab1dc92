#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/geometry.hpp"
#include "inls/smooth_step.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace inls;

namespace {

const double kPi = std::numbers::pi;

TranslationSequence fixture(int first, int last) {
    return TranslationSequence::generate(
        first, last, [](int n) { return 16.0 * std::pow(2.0, n); }, [](int n) { return 1.0 / n; }, 0.0);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("smooth step") {
    CHECK(smooth_step(-0.1).value == 0.0);
    CHECK(smooth_step(0.0).value == 0.0);
    CHECK(smooth_step(1.0).value == 1.0);
    CHECK(smooth_step(1.5).value == 1.0);
    CHECK(smooth_step(0.5).value == doctest::Approx(0.5));
    const double h = 1e-5;
    for (double t : {0.1, 0.3, 0.62, 0.9}) {
        const auto s = smooth_step(t);
        CHECK(s.d1 == doctest::Approx((smooth_step(t + h).value - smooth_step(t - h).value) / (2 * h)).epsilon(1e-6));
        CHECK(s.d2 == doctest::Approx((smooth_step(t + h).d1 - smooth_step(t - h).d1) / (2 * h)).epsilon(1e-5));
        CHECK(smooth_step(t).value + smooth_step(1 - t).value == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(dyadic_bump(0.7) == 1.0);
    CHECK(dyadic_bump(2.0) == 0.0);
}

TEST_CASE("translation sequences validate") {
    CHECK_THROWS_AS(TranslationSequence(1, {{2.0, 0.0}, {1.0, 0.0}}, 0.0), ValidationError);
    CHECK_THROWS_AS(TranslationSequence(1, {}, 0.0), ValidationError);
    const auto s = fixture(3, 6);
    CHECK(s.first_index() == 3);
    CHECK(s.last_index() == 6);
    CHECK(s.polar(4).r == 256.0);
    CHECK_THROWS_AS(s.polar(7), ValidationError);
    CHECK(norm(s.center(5)) == doctest::Approx(512.0));
}

TEST_CASE("annular cutoff") {
    const Vec2 xn{30.0, 40.0};
    const auto c = annular_cutoff(1, xn);
    CHECK(c.value({0.0, 0.0}) == 1.0);  // |x + x_n| = |x_n|
    CHECK(c.value({-30.0, -40.0}) == 0.0);
    CHECK(c.in_hole({-30.0, -40.0}));
    CHECK(c.in_plateau({0.0, 0.0}));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-80.0, 80.0);
    const double h = 1e-4;
    for (int k = 0; k < 500; ++k) {
        const Vec2 x{u(rng), u(rng)};
        const auto s = c.eval(x);
        CHECK(s.value >= 0.0);
        CHECK(s.value <= 1.0);
        const double fx = (c.value({x.x + h, x.y}) - c.value({x.x - h, x.y})) / (2 * h);
        const double fy = (c.value({x.x, x.y + h}) - c.value({x.x, x.y - h})) / (2 * h);
        CHECK(std::abs(fx - s.gradient.x) < 1e-6);
        CHECK(std::abs(fy - s.gradient.y) < 1e-6);
        const double lap = (c.value({x.x + h, x.y}) + c.value({x.x - h, x.y}) + c.value({x.x, x.y + h}) +
                            c.value({x.x, x.y - h}) - 4 * s.value) / (h * h);
        CHECK(std::abs(lap - s.laplacian) < 1e-4);
    }
}

TEST_CASE("threshold branches") {
    // theta_n = theta_inf, r = 1e4, p = 3: radius branch
    const auto t = triangular_threshold(1e4, 0.2, 0.2, 3.0);
    CHECK_FALSE(t.angle_branch);
    CHECK(t.omega == doctest::Approx(std::asin(std::pow(10.0, -0.8))).epsilon(1e-15));
    CHECK(t.reached());
    // angle branch in the fixture at n = 29
    const auto a = triangular_threshold(16.0 * std::pow(2.0, 29), 1.0 / 29, 0.0, 3.0);
    CHECK(a.angle_branch);
    CHECK(a.omega == doctest::Approx(17.0 / 29));
    CHECK(a.reached());
    // below threshold at n = 20
    CHECK_FALSE(triangular_threshold(16.0 * std::pow(2.0, 20), 1.0 / 20, 0.0, 3.0).reached());
    const auto seq = fixture(20, 30);
    CHECK_THROWS_AS(triangular_cutoff(20, seq, Power(Rational(3))), ThresholdError);
    CHECK_NOTHROW(triangular_cutoff(29, seq, Power(Rational(3))));
}

TEST_CASE("separation distance") {
    // r = 16, p = 2, theta_n = theta_inf: omega = asin(16^{-1/4}) = pi/6, d = 2
    const TriangularCutoff c(1, {16.0, 0.0}, 0.0, 2.0);
    CHECK(c.omega() == doctest::Approx(kPi / 6).epsilon(1e-15));
    CHECK(c.gap() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.separation() == doctest::Approx(2.0).epsilon(1e-14));

    const auto seq = fixture(29, 40);
    for (int n = 29; n <= 40; ++n) {
        const auto cut = triangular_cutoff(n, seq, Power(Rational(3)));
        CHECK(std::abs(cut.separation() - cut.gap()) <= 1e-13 * cut.gap());
        CHECK(cut.gap() >= std::pow(cut.r(), 4.0 / 5.0) / 4.0);
    }
}

TEST_CASE("triangular cutoff values") {
    const auto seq = fixture(29, 33);
    const auto c = triangular_cutoff(30, seq, Power(Rational(3)));
    // centroid of T1 in the rotated frame (r units): vertices (1/2, 0), (3/2, +-tan w)
    const Vec2 centroid_rot{c.r() * 7.0 / 6.0, 0.0};
    const Vec2 X = c.from_rotated(centroid_rot);
    CHECK(c.in_t1_absolute(X));
    CHECK(c.eval_absolute(X).value == 1.0);
    CHECK(c.eval({X.x - c.center().x, X.y - c.center().y}).value == 1.0);
    // outside T2
    CHECK(c.eval_absolute(c.from_rotated({0.1 * c.r(), 0.0})).value == 0.0);
    CHECK(c.eval_absolute(c.from_rotated({2.0 * c.r(), 0.0})).value == 0.0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.8), v(-1.0, 1.0);
    const double h = 1e-6;
    for (int k = 0; k < 2000; ++k) {
        const Vec2 xi{u(rng), v(rng)};
        const auto s = c.eval_scaled(xi);
        CHECK(s.value >= 0.0);
        CHECK(s.value <= 1.0);
        const Vec2 X2 = c.from_rotated({xi.x * c.r(), xi.y * c.r()});
        if (norm(s.gradient) > 1e-12) {
            CHECK(c.in_t2_absolute(X2));
            CHECK_FALSE(c.in_t1_absolute(X2));
        }
        const double fx = (c.eval_scaled({xi.x + h, xi.y}).value - c.eval_scaled({xi.x - h, xi.y}).value) / (2 * h);
        const double fy = (c.eval_scaled({xi.x, xi.y + h}).value - c.eval_scaled({xi.x, xi.y - h}).value) / (2 * h);
        CHECK(std::abs(fx - s.gradient.x) < 1e-4 * std::max(1.0, norm(s.gradient)));
        CHECK(std::abs(fy - s.gradient.y) < 1e-4 * std::max(1.0, norm(s.gradient)));
    }
}

TEST_CASE("T2 quadrature reproduces the area") {
    const auto seq = fixture(29, 31);
    const auto c = triangular_cutoff(31, seq, Power(Rational(3)));
    const double a = integrate_t2_scaled(c, [](Vec2) { return 1.0; });
    CHECK(a * c.r() * c.r() == doctest::Approx(c.t2_area()).epsilon(1e-12));
}

TEST_CASE("verification on the constant weight") {
    const auto seq = fixture(29, 33);
    const auto w = catalog_weight("constant");
    const auto lim = estimate_angular_limit(w, SamplingConfig{});
    CutoffVerifyConfig cfg;
    cfg.area_samples = 20000;
    const auto rep = verify_cutoff_properties(seq, Power(Rational(3)), w, lim, {29, 30, 31, 32, 33}, cfg);
    CHECK(rep.c2);
    for (const auto& e : rep.entries) CHECK(e.c2_sup == 0.0);
    CHECK(rep.c1);
    for (const auto& e : rep.entries) CHECK(std::abs(e.area_monte_carlo - e.area_exact) < 0.05 * e.area_exact);
}

TEST_CASE("below-threshold indices are reported, not verified") {
    const auto seq = fixture(20, 31);
    const auto w = catalog_weight("anisotropic");
    const auto lim = estimate_angular_limit(w, SamplingConfig{});
    CutoffVerifyConfig cfg;
    cfg.area_samples = 10000;
    const auto rep = verify_cutoff_properties(seq, Power(Rational(3)), w, lim, {22, 29, 30, 31}, cfg);
    CHECK(rep.below_threshold == std::vector<int>{22});
    CHECK(rep.threshold_index == 29);
    CHECK(rep.entries.size() == 3);
}

}
