#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/field.hpp"
#include "inls/spectral.hpp"
#include "inls/trajectory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace inls;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;

Field gaussian(const Grid& g, double w = 1.0) {
    return Field::sample(g, [w](Vec2 x) { return cplx(std::exp(-(x.x * x.x + x.y * x.y) / (w * w)), 0.0); });
}

Field plane_wave(const Grid& g, int mx, int my) {
    const double k = g.fundamental();
    return Field::sample(g, [=](Vec2 x) { return std::exp(cplx(0.0, k * (mx * x.x + my * x.y))); });
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double radial(auto f, double R) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, R, 15, 1e-14);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("grid geometry") {
    const Grid g(8, 2 * kPi);
    CHECK(g.spacing() == doctest::Approx(kPi / 4));
    CHECK(g.wavenumber(0) == 0.0);
    CHECK(g.wavenumber(3) == doctest::Approx(3.0));
    CHECK(g.wavenumber(4) == doctest::Approx(-4.0));
    CHECK(g.wavenumber(7) == doctest::Approx(-1.0));
    CHECK(g.point(std::size_t{9}).x == doctest::Approx(g.coord(1)));
    CHECK_THROWS_AS(Grid(7, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid(8, -1.0), ValidationError);
}

TEST_CASE("fft round trip") {
    const Grid g(32, 10.0);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    std::vector<cplx> v(g.size());
    for (auto& z : v) z = {n01(rng), n01(rng)};
    const Field f(g, v);
    const Field back = Field::from_spectrum(g, std::vector<cplx>(f.spectrum().begin(), f.spectrum().end()));
    CHECK(max_diff(f, back) < 1e-13);
}

TEST_CASE("free propagation") {
    const Grid g(32, 2 * kPi);
    const Field pw = plane_wave(g, 3, -2);
    CHECK(max_diff(free_propagate(pw, 0.0), pw) < 1e-15);
    const double t = 0.37;
    const Field exact = pw * std::exp(cplx(0.0, -13.0 * t));
    CHECK(max_diff(free_propagate(pw, t), exact) < 1e-12);
    // group property
    const Field gs = gaussian(Grid(64, 20.0));
    CHECK(max_diff(free_propagate(free_propagate(gs, 0.3), 0.4), free_propagate(gs, 0.7)) < 1e-13);
}

TEST_CASE("littlewood-paley ladder") {
    const Grid g(64, 32.0);
    const auto ladder = dyadic_ladder(g);
    REQUIRE(ladder.size() >= 3);
    CHECK(ladder.front() == doctest::Approx(g.fundamental()));
    CHECK(ladder.back() <= g.nyquist() * (1 + 1e-12));
    std::vector<double> sum(g.size(), 0.0);
    for (double N : ladder) {
        const auto m = lp_multiplier(g, N);
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m[i] >= 0.0);
            CHECK(m[i] <= 1.0);
            sum[i] += m[i];
        }
    }
    for (std::size_t i = 1; i < sum.size(); ++i) CHECK(sum[i] == doctest::Approx(1.0).epsilon(1e-14));

    // plane wave at the annulus center: |k| = N exactly with k = (N, 0)
    const double N = ladder[2];
    const int m = static_cast<int>(std::lround(N / g.fundamental()));
    const Field pw = plane_wave(g, m, 0);
    CHECK(max_diff(lp_project(pw, N), pw) < 1e-12);
    CHECK_THROWS_AS(lp_project(pw, 0.5 * g.fundamental()), ValidationError);
}

TEST_CASE("lebesgue and sobolev norms of a gaussian") {
    const Grid g(128, 16.0);
    const Field f = gaussian(g);
    CHECK(lebesgue_norm(f, 2.0) * lebesgue_norm(f, 2.0) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(lebesgue_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    CHECK(sobolev_norm(f, 0.0, false) == doctest::Approx(lebesgue_norm(f, 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(f, 0.0, true) == doctest::Approx(lebesgue_norm(f, 2.0)).epsilon(1e-12));

    // ||grad f||^2 = 2 pi int 4 r^3 e^{-2 r^2} dr
    const double grad2 = radial([](double r) { return 2 * kPi * 4 * r * r * r * std::exp(-2 * r * r); }, 10.0);
    const double s1 = sobolev_norm(f, 1.0, true);
    CHECK(s1 * s1 == doctest::Approx(grad2).epsilon(1e-10));
    // L^4: int e^{-4 r^2} 2 pi r dr = pi / 4
    const double l4 = lebesgue_norm(f, 4.0);
    CHECK(std::pow(l4, 4) == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(lebesgue_norm(Field::zeros(g), 3.0) == 0.0);
}

TEST_CASE("spectral gradient of a plane wave") {
    const Grid g(16, 2 * kPi);
    const Field pw = plane_wave(g, 2, 5);
    const auto d = spectral_gradient(pw);
    CHECK(max_diff(d[0], pw * cplx(0.0, 2.0)) < 1e-12);
    CHECK(max_diff(d[1], pw * cplx(0.0, 5.0)) < 1e-12);
}

TEST_CASE("refined sobolev ratio") {
    const Grid g(64, 2 * kPi);
    const Field pw = plane_wave(g, 4, 1);
    const auto a = refined_sobolev_ratio(pw, 6.0);
    CHECK(std::isfinite(a.ratio));
    CHECK(a.ratio > 0.05);
    CHECK(a.ratio < 20.0);
    const auto b = refined_sobolev_ratio(pw * 2.0, 6.0);
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
    CHECK(refined_sobolev_sigma(4.0) == doctest::Approx(0.5));
    CHECK(refined_sobolev_sigma(8.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(refined_sobolev_ratio(pw, 2.0), ValidationError);
}

TEST_CASE("spacetime norms") {
    const Grid g(32, 8.0);
    const Field f = gaussian(g);
    std::vector<double> times;
    std::vector<Field> snaps;
    for (int k = 0; k <= 16; ++k) {
        times.push_back(k / 16.0);
        snaps.push_back(f);
    }
    const Trajectory traj(times, snaps, {});
    for (double q : {2.0, 3.0, 7.5})
        for (double r : {2.0, 4.0, 9.0})
            CHECK(spacetime_norm(traj, {q, r, 0.0, 1.0}) == doctest::Approx(lebesgue_norm(f, r)).epsilon(1e-13));

    std::vector<Field> zero(times.size(), Field::zeros(g));
    CHECK(spacetime_norm(Trajectory(times, zero, {}), {4.0, 4.0, 0.0, 1.0}) == 0.0);

    // two snapshots over [0, 1] are too sparse at density 8
    const Trajectory sparse({0.0, 1.0}, {f, f}, {});
    CHECK_THROWS_AS(spacetime_norm(sparse, {2.0, 2.0, 0.0, 1.0}), ValidationError);
}

TEST_CASE("time_lebesgue is exact for linear data with exponent 1") {
    CHECK(time_lebesgue({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("snapshot and trajectory round trip") {
    const fs::path dir = fs::temp_directory_path() / "inls_unit_snapshots";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const Grid g(16, 5.0);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    std::vector<cplx> v(g.size());
    for (auto& z : v) z = {n01(rng), n01(rng)};
    const Field f(g, v);
    write_snapshot(dir / "a.snap", {f, 1.25, "3/2", "gaussian"});
    const auto rec = read_snapshot(dir / "a.snap");
    CHECK(rec.time == 1.25);
    CHECK(rec.p == "3/2");
    CHECK(rec.weight_label == "gaussian");
    CHECK(rec.field.grid() == g);
    CHECK(max_diff(rec.field, f) == 0.0);

    TrajectoryMeta meta;
    meta.p = "2";
    meta.weight = {"gaussian", {{"width", 2.0}}};
    meta.weight_label = "gaussian";
    meta.solver["dt"] = "0.01";
    const Trajectory traj({0.0, 0.5}, {f, f * 2.0}, meta);
    write_trajectory(dir / "traj", traj);
    const Trajectory back = read_trajectory(dir / "traj");
    CHECK(back.size() == 2);
    CHECK(back.times()[1] == 0.5);
    CHECK(back.meta().weight.params.at("width") == 2.0);
    CHECK(back.meta().solver.at("dt") == "0.01");
    CHECK(max_diff(back.snapshots()[1], f * 2.0) == 0.0);

    // corrupt magic
    {
        std::fstream io(dir / "a.snap", std::ios::in | std::ios::out | std::ios::binary);
        io.seekp(0);
        io.put('X');
    }
    CHECK_THROWS_AS(read_snapshot(dir / "a.snap"), ValidationError);
    CHECK_THROWS_AS(read_snapshot(dir / "missing.snap"), ValidationError);
    fs::remove_all(dir);
}

}
