// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failed criteria (capped at 100).
//
//   inls_acceptance [--out DIR] [--only 1,4,7]

#include "inls/diagnostics.hpp"
#include "inls/errors.hpp"
#include "inls/experiment.hpp"
#include "inls/geometry.hpp"
#include "inls/initial_data.hpp"
#include "inls/scaling.hpp"
#include "inls/solver.hpp"
#include "inls/spectral.hpp"
#include "inls/weights.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace inls;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances ------------------------------------------------------
constexpr int kIdentityCount = 200;
constexpr double kIdentitySeconds = 1.0;
constexpr double kMassDrift = 1e-11;
constexpr double kOrderLo = 3.5, kOrderHi = 4.5;
constexpr double kGaugeRel = 1e-8;
constexpr int kGaugeFields = 50;
constexpr double kZOracleRel = 1e-6;
constexpr double kMorawetzChange = 0.05;
constexpr double kPotentialDecay = 10.0;
constexpr std::size_t kPointwiseSamples = 1000000;
constexpr double kPointwiseStability = 2.0;
constexpr double kSlopeTarget = -0.2;  // -1/(p+2) at p = 3
constexpr double kSlopeBand = 0.15;
constexpr double kSeparationRel = 1e-12;
constexpr double kFreeDuhamel = 1e-10;

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path g_out;
std::vector<fs::path> g_manifests;  // single-run manifests for the reproducibility check

std::vector<std::pair<std::string, std::string>> out_to(const std::string& sub,
                                                         std::vector<std::pair<std::string, std::string>> extra = {}) {
    extra.emplace_back("output_dir", (g_out / sub).string());
    return extra;
}

RunManifest preset_run(const std::string& preset, const std::string& sub,
                       std::vector<std::pair<std::string, std::string>> extra = {}) {
    RunManifest m = run_preset(preset, out_to(sub, std::move(extra)));
    g_manifests.push_back(m.directory / "manifest.json");
    return m;
}

// ---- criteria ---------------------------------------------------------------

Outcome c1_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    int failed = 0;
    std::string first_bad;
    for (int k = 1; k <= kIdentityCount; ++k) {
        const Power p(Rational(k, kIdentityCount / 10));  // k/20 spans (0, 10]
        const auto rep = verify_identities(p);
        if (!rep.all_pass()) {
            ++failed;
            if (first_bad.empty()) first_bad = p.str();
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = failed == 0 && secs < kIdentitySeconds;
    o.detail = fmt("%d p values, %d failing%s%s, %.3f s (limit %.1f s)", kIdentityCount, failed,
                   first_bad.empty() ? "" : ", first ", first_bad.c_str(), secs, kIdentitySeconds);
    return o;
}

Outcome c2_mass() {
    const auto m = preset_run("mass-conservation", "c2_mass", {{"write_snapshots", "false"}});
    const double drift = m.scalars.at("max_mass_drift");
    return {drift < kMassDrift, fmt("relative mass drift %.3e (limit %.0e), escape breached: %s", drift, kMassDrift,
                                    m.monitors.escape_breached ? "yes" : "no")};
}

Outcome c3_strang() {
    std::vector<double> err;
    int stride = 5;
    for (const char* dt : {"0.01", "0.005", "0.0025"}) {
        const auto m = preset_run("plane-wave", std::string("c3_plane_wave_dt") + dt,
                                  {{"dt", dt}, {"stride", std::to_string(stride)}, {"write_snapshots", "false"}});
        err.push_back(m.scalars.at("plane_wave_error"));
        stride *= 2;
    }
    const double r1 = err[0] / err[1], r2 = err[1] / err[2];
    auto in = [](double r) { return r >= kOrderLo && r <= kOrderHi; };
    return {in(r1) && in(r2), fmt("terminal errors %.3e %.3e %.3e, ratios %.3f %.3f (band [%.1f, %.1f])", err[0],
                                  err[1], err[2], r1, r2, kOrderLo, kOrderHi)};
}

Outcome c4_energy() {
    std::vector<double> drift;
    int stride = 10;
    for (const char* dt : {"0.01", "0.005", "0.0025"}) {
        const auto m = preset_run("energy-drift", std::string("c4_energy_dt") + dt,
                                  {{"dt", dt}, {"stride", std::to_string(stride)}, {"write_snapshots", "false"}});
        drift.push_back(m.scalars.at("max_energy_drift"));
        stride *= 2;
    }
    const double r1 = drift[0] / drift[1], r2 = drift[1] / drift[2];
    auto in = [](double r) { return r >= kOrderLo && r <= kOrderHi; };
    return {in(r1) && in(r2), fmt("max energy drift %.3e %.3e %.3e, ratios %.3f %.3f (band [%.1f, %.1f])", drift[0],
                                  drift[1], drift[2], r1, r2, kOrderLo, kOrderHi)};
}

// Localized, band-limited: a low trigonometric polynomial under a Gaussian envelope.
Field random_packet(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> n01;
    struct Mode {
        double kx, ky;
        cplx c;
    };
    std::vector<Mode> modes;
    for (int k = 0; k < 6; ++k) modes.push_back({1.5 * u(rng), 1.5 * u(rng), {n01(rng), n01(rng)}});
    const double cx = 2.0 * u(rng), cy = 2.0 * u(rng), w = 1.25 + 0.5 * u(rng);
    return Field::sample(g, [&](Vec2 x) {
        cplx s = 0.0;
        for (const auto& m : modes) s += m.c * std::exp(cplx(0.0, m.kx * x.x + m.ky * x.y));
        const double dx = x.x - cx, dy = x.y - cy;
        return s * std::exp(-(dx * dx + dy * dy) / (w * w));
    });
}

Outcome c5_gauge() {
    const Grid g(256, 40.0);
    std::mt19937_64 rng(20240607);
    double worst = 0.0;
    for (int k = 0; k < kGaugeFields; ++k) {
        const Field f = random_packet(g, rng);
        for (double t : {1.0, 2.0, 8.0}) {
            const double lhs = z_norm(f, t, true);
            const double rhs = z_gauge_side(f, t);
            worst = std::max(worst, std::abs(lhs - rhs) / lhs);
        }
    }
    return {worst < kGaugeRel, fmt("%d fields x t in {1, 2, 8}: max relative discrepancy %.3e (limit %.0e)",
                                   kGaugeFields, worst, kGaugeRel)};
}

Outcome c6_z_oracle() {
    const double t = 2.0;
    const double bt3 = std::pow(1.0 + t * t, 1.5);
    // Integrand of ||u||_Z^2 for u = e^{-|x|^2}: t |x|^2 (1 + 16 t^2) e^{-2|x|^2} / (<t>^3 + |x|^3).
    auto integrand = [&](double x, double y) {
        const double r2 = x * x + y * y, r = std::sqrt(r2);
        return t * r2 * (1 + 16 * t * t) * std::exp(-2 * r2) / (bt3 + r2 * r);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double half = 7.0;
    const double oracle = std::sqrt(GK::integrate(
        [&](double y) { return GK::integrate([&](double x) { return integrand(x, y); }, -half, half, 12, 1e-14); },
        -half, half, 12, 1e-14));
    const Grid g(128, 16.0);
    const Field f = Field::sample(g, [](Vec2 x) { return cplx(std::exp(-(x.x * x.x + x.y * x.y)), 0.0); });
    const double z = z_norm(f, t);
    const double rel = std::abs(z - oracle) / oracle;
    return {rel < kZOracleRel, fmt("z_norm %.12f, 2D quadrature %.12f, relative %.3e (limit %.0e)", z, oracle, rel,
                                   kZOracleRel)};
}

Outcome c7_morawetz() {
    const RunManifest top = run_preset("morawetz-matrix", out_to("c7_morawetz_matrix", {{"write_snapshots", "false"}}));
    double worst_change = 0.0, C = 0.0, lo_ratio = INFINITY;
    std::ostringstream cells;
    bool bounded = true;
    for (const auto& child : top.children) {
        const RunManifest cm = read_manifest(top.directory / child / "manifest.json");
        if (child == top.children.front()) g_manifests.push_back(top.directory / child / "manifest.json");
        const double i64 = cm.scalars.at("morawetz_integral"), i32 = cm.scalars.at("morawetz_integral_half");
        const double me = cm.scalars.at("mass_plus_energy");
        const double change = std::abs(i64 - i32) / i32;
        worst_change = std::max(worst_change, change);
        C = std::max(C, i64 / me);
        lo_ratio = std::min(lo_ratio, i64 / me);
        bounded = bounded && std::isfinite(i64) && std::isfinite(me) && me > 0;
        cells << fmt(" %.1f%%", 100 * change);
    }
    for (const auto& child : top.children) {
        const RunManifest cm = read_manifest(top.directory / child / "manifest.json");
        bounded = bounded && cm.scalars.at("morawetz_integral") <= C * cm.scalars.at("mass_plus_energy");
    }
    const bool ok = top.children.size() == 9 && worst_change < kMorawetzChange && bounded;
    return {ok, fmt("9 cells, T 32 -> 64 change:%s (limit %.0f%%); integral <= C (M+E) with C = %.4f (min ratio %.4f)",
                    cells.str().c_str(), 100 * kMorawetzChange, C, lo_ratio)};
}

Outcome c8_scattering() {
    std::string detail;
    bool ok = true;
    for (const char* preset : {"small-data-scatter", "moderate-scatter"}) {
        const auto m = preset_run(preset, std::string("c8_") + preset, {{"write_snapshots", "false"}});
        const std::string verdict = m.labels.at("scattering_verdict");
        const double decay = m.scalars.at("potential_decay");
        ok = ok && verdict == "scattering-consistent" && decay >= kPotentialDecay;
        detail += fmt("%s%s: %s, potential decay %.1fx", detail.empty() ? "" : "; ", preset, verdict.c_str(), decay);
    }
    return {ok, detail};
}

Outcome c9_pointwise() {
    bool ok = true;
    std::string detail;
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
        const auto a = pointwise_inequality_check(random_pointwise_samples(kPointwiseSamples, 3, 101), 3, p);
        const auto b = pointwise_inequality_check(random_pointwise_samples(kPointwiseSamples, 3, 202), 3, p);
        auto stable = [](double x, double y) {
            return std::isfinite(x) && std::isfinite(y) && x > 0 && y > 0 && std::max(x / y, y / x) < kPointwiseStability;
        };
        const bool here = stable(a.max_ratio_difference, b.max_ratio_difference) && stable(a.max_ratio_sum, b.max_ratio_sum);
        ok = ok && here;
        detail += fmt("%sp=%g diff %.3f/%.3f sum %.3f/%.3f", detail.empty() ? "" : "; ", p, a.max_ratio_difference,
                      b.max_ratio_difference, a.max_ratio_sum, b.max_ratio_sum);
    }
    return {ok, detail};
}

TranslationSequence cutoff_fixture() {
    return TranslationSequence::generate(
        1, 45, [](int n) { return 16.0 * std::pow(2.0, n); }, [](int n) { return 1.0 / n; }, 0.0);
}

std::vector<int> fixture_indices() {
    std::vector<int> v;
    for (int n = 20; n <= 45; ++n) v.push_back(n);
    return v;
}

Outcome c10_cutoffs() {
    const Weight w = catalog_weight("anisotropic");
    const AngularLimit lim = estimate_angular_limit(w, SamplingConfig{});
    CutoffVerifyConfig cfg;
    cfg.slope_tolerance = kSlopeBand;
    const auto rep = verify_cutoff_properties(cutoff_fixture(), Power(Rational(3)), w, lim, fixture_indices(), cfg);
    const bool slope_in = std::abs(rep.grad_slope - kSlopeTarget) <= kSlopeBand;
    const bool ok = rep.c1 && rep.c2 && rep.c3 && slope_in && !rep.entries.empty();
    return {ok, fmt("threshold n = %d, verified %zu indices; C1 %s C2 %s C3 %s; grad slope %.4f (target %.2f +- %.2f)",
                    rep.threshold_index, rep.entries.size(), rep.c1 ? "ok" : "FAIL", rep.c2 ? "ok" : "FAIL",
                    rep.c3 ? "ok" : "FAIL", rep.grad_slope, kSlopeTarget, kSlopeBand)};
}

Outcome c11_separation() {
    const auto seq = cutoff_fixture();
    const Power p(Rational(3));
    double worst = 0.0, min_margin = INFINITY;
    int count = 0;
    for (int n : fixture_indices()) {
        if (!triangular_threshold(seq.polar(n).r, seq.polar(n).theta, 0.0, 3.0).reached()) continue;
        const auto c = triangular_cutoff(n, seq, p);
        const double closed = c.r() * std::sin(c.omega()) / 4.0;
        worst = std::max(worst, std::abs(c.separation() - closed) / closed);
        min_margin = std::min(min_margin, c.separation() / (std::pow(c.r(), 4.0 / 5.0) / 4.0));
        ++count;
    }
    // r = 16, omega = pi/6 gives d = 2 exactly.
    const TriangularCutoff unit(1, {16.0, 0.0}, 0.0, 2.0);
    const double d_unit = unit.separation();
    const bool ok = count > 0 && worst < kSeparationRel && min_margin >= 1.0 && std::abs(d_unit - 2.0) < 1e-14;
    return {ok, fmt("%d fixture indices: max |d - r sin(w)/4| / d = %.2e (limit %.0e), min d / floor = %.3e; "
                    "r=16, w=pi/6: d = %.15f",
                    count, worst, kSeparationRel, min_margin, d_unit)};
}

Outcome c12_duhamel() {
    const auto free = preset_run("free-gaussian", "c12_free_gaussian");
    const double free_res = free.scalars.at("duhamel_residual");

    SolverConfig pw;
    pw.grid = Grid(32, 2 * kPi);
    pw.p = Power(Rational(3));
    pw.weight = catalog_weight("constant");
    pw.dt = 1e-3;
    pw.t_end = 1.0;
    pw.escape_policy = EscapePolicy::record;
    const Field u0 = make_initial_data({"plane_wave", {{"mx", 2}, {"my", 1}}}, pw.grid);
    std::vector<double> res;
    for (int stride : {40, 20, 10}) {
        pw.snapshot_stride = stride;
        res.push_back(duhamel_residual(run(pw, u0).trajectory, 0.0, 1.0).residual);
    }
    const double r1 = res[0] / res[1], r2 = res[1] / res[2];
    auto in = [](double r) { return r >= kOrderLo && r <= kOrderHi; };
    const bool ok = free_res < kFreeDuhamel && in(r1) && in(r2);
    return {ok, fmt("free residual %.3e (limit %.0e); plane wave residual %.3e %.3e %.3e, ratios %.3f %.3f", free_res,
                    kFreeDuhamel, res[0], res[1], res[2], r1, r2)};
}

Outcome c13_reproduce() {
    if (g_manifests.empty()) return {false, "no manifests were produced by the selected criteria"};
    int identical = 0, csvs = 0;
    std::string bad;
    for (std::size_t k = 0; k < g_manifests.size(); ++k) {
        const auto rep = reproduce_manifest(g_manifests[k], g_out / fmt("c13_rerun_%02zu", k));
        csvs += static_cast<int>(rep.compared.size());
        if (rep.identical && !rep.compared.empty()) {
            ++identical;
        } else if (bad.empty()) {
            bad = g_manifests[k].parent_path().filename().string();
        }
    }
    const bool ok = identical == static_cast<int>(g_manifests.size());
    return {ok, fmt("%d of %zu manifests reproduced bit-exactly (%d CSV files)%s%s", identical, g_manifests.size(), csvs,
                    bad.empty() ? "" : ", first mismatch ", bad.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
    g_out = fs::temp_directory_path() / "inls_acceptance";
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--out" && i + 1 < argc) {
            g_out = argv[++i];
        } else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else {
            std::fprintf(stderr, "usage: %s [--out DIR] [--only 1,2,...]\n", argv[0]);
            return 2;
        }
    }
    fs::remove_all(g_out);
    fs::create_directories(g_out);

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "exponent identities", c1_identities},
        {2, "mass conservation", c2_mass},
        {3, "Strang second order (plane wave)", c3_strang},
        {4, "energy drift O(dt^2)", c4_energy},
        {5, "Z-norm gauge identity", c5_gauge},
        {6, "Z-norm quadrature oracle", c6_z_oracle},
        {7, "Morawetz boundedness", c7_morawetz},
        {8, "scattering consistency", c8_scattering},
        {9, "pointwise estimates", c9_pointwise},
        {10, "cutoff properties", c10_cutoffs},
        {11, "separation distance", c11_separation},
        {12, "Duhamel residual", c12_duhamel},
        {13, "reproducibility", c13_reproduce},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return std::min(failed, 100);
}
