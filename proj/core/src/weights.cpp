#include "inls/weights.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace inls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double param(const WeightSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

void reject_unknown(const WeightSpec& spec, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : spec.params) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ValidationError("weight family '" + spec.family + "' has no parameter '" + key + "'");
    }
}

Weight gaussian(const WeightSpec& spec) {
    reject_unknown(spec, {"amplitude", "width"});
    const double c = param(spec, "amplitude", 1.0);
    const double l = param(spec, "width", 1.0);
    if (c < 0 || l <= 0) throw ValidationError("gaussian weight needs amplitude >= 0 and width > 0");
    const double inv = 1.0 / (l * l);
    Weight w;
    w.label = "gaussian";
    w.spec = spec;
    w.value = [c, inv](Vec2 x) { return c * std::exp(-(x.x * x.x + x.y * x.y) * inv); };
    w.gradient = [c, inv](Vec2 x) {
        const double f = -2.0 * inv * c * std::exp(-(x.x * x.x + x.y * x.y) * inv);
        return Vec2{f * x.x, f * x.y};
    };
    AnalyticNorms n;
    n.l1 = c * kPi * l * l;
    n.linf = c;
    // |grad a| = 2 c r / l^2 e^{-r^2/l^2}
    n.gradient_l1 = c * std::pow(kPi, 1.5) * l;
    n.gradient_linf = c * std::sqrt(2.0) * std::exp(-0.5) / l;
    n.lrho = [c, l](double rho) {
        if (std::isinf(rho)) return c;
        return c * std::pow(kPi * l * l / rho, 1.0 / rho);
    };
    w.analytic_norms = n;
    return w;
}

Weight constant(const WeightSpec& spec) {
    reject_unknown(spec, {"value"});
    const double c = param(spec, "value", 1.0);
    if (c < 0) throw ValidationError("constant weight must be nonnegative");
    Weight w;
    w.label = "constant";
    w.spec = spec;
    w.value = [c](Vec2) { return c; };
    w.gradient = [](Vec2) { return Vec2{0.0, 0.0}; };
    AnalyticNorms n;
    n.l1 = c == 0 ? 0.0 : kInf;
    n.linf = c;
    n.lrho = [c](double rho) { return (std::isinf(rho) || c == 0) ? c : kInf; };
    w.analytic_norms = n;
    return w;
}

Weight inverse_quadratic(const WeightSpec& spec) {
    reject_unknown(spec, {"amplitude", "width"});
    const double c = param(spec, "amplitude", 1.0);
    const double l = param(spec, "width", 1.0);
    if (c < 0 || l <= 0) throw ValidationError("inverse_quadratic weight needs amplitude >= 0 and width > 0");
    const double inv = 1.0 / (l * l);
    Weight w;
    w.label = "inverse_quadratic";
    w.spec = spec;
    w.value = [c, inv](Vec2 x) { return c / (1.0 + (x.x * x.x + x.y * x.y) * inv); };
    w.gradient = [c, inv](Vec2 x) {
        const double d = 1.0 + (x.x * x.x + x.y * x.y) * inv;
        const double f = -2.0 * c * inv / (d * d);
        return Vec2{f * x.x, f * x.y};
    };
    AnalyticNorms n;
    n.l1 = kInf;
    n.linf = c;
    n.gradient_l1 = c * kPi * kPi * l;
    n.gradient_linf = c * 3.0 * std::sqrt(3.0) / (8.0 * l);
    n.lrho = [c, l](double rho) {
        if (std::isinf(rho)) return c;
        if (rho <= 1.0) return kInf;
        return c * std::pow(kPi * l * l / (rho - 1.0), 1.0 / rho);
    };
    w.analytic_norms = n;
    return w;
}

// a(x) = 3 - (1 - x1/|x|)(1 - e^{-|x|^2}); angular limit 2 + cos(theta).
Weight anisotropic(const WeightSpec& spec) {
    reject_unknown(spec, {});
    Weight w;
    w.label = "anisotropic";
    w.spec = spec;
    w.value = [](Vec2 x) {
        const double r2 = x.x * x.x + x.y * x.y;
        if (r2 == 0.0) return 3.0;
        const double r = std::sqrt(r2);
        return 3.0 - (1.0 - x.x / r) * (-std::expm1(-r2));
    };
    w.gradient = [](Vec2 x) {
        const double r2 = x.x * x.x + x.y * x.y;
        if (r2 == 0.0) return Vec2{0.0, 0.0};
        const double r = std::sqrt(r2);
        const double r3 = r2 * r;
        const double g = 1.0 - x.x / r;
        const double h = -std::expm1(-r2);
        const double e = std::exp(-r2);
        // grad g = -(e1/r - x1 x / r^3), grad h = 2 x e^{-r^2}
        const double gx = -(1.0 / r - x.x * x.x / r3);
        const double gy = x.x * x.y / r3;
        return Vec2{-(gx * h + g * 2.0 * x.x * e), -(gy * h + g * 2.0 * x.y * e)};
    };
    AnalyticNorms n;
    n.l1 = kInf;
    n.linf = 3.0;
    n.gradient_l1 = kInf;
    n.lrho = [](double rho) { return std::isinf(rho) ? 3.0 : kInf; };
    w.analytic_norms = n;
    return w;
}

Weight zero(const WeightSpec& spec) {
    reject_unknown(spec, {});
    Weight w;
    w.label = "zero";
    w.spec = spec;
    w.value = [](Vec2) { return 0.0; };
    w.gradient = [](Vec2) { return Vec2{0.0, 0.0}; };
    AnalyticNorms n;
    n.lrho = [](double) { return 0.0; };
    w.analytic_norms = n;
    return w;
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

double annulus_integral(const std::function<double(Vec2)>& f, double r0, double r1, int angular) {
    const int panels = std::max(1, static_cast<int>(std::ceil((r1 - r0) / 0.25)));
    const double h = (r1 - r0) / panels;
    const double dtheta = 2.0 * kPi / angular;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = r0 + k * h;
        double panel = 0.0;
        for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
            const double r = a + 0.5 * h * (kGlNodes[g] + 1.0);
            double ring = 0.0;
            for (int j = 0; j < angular; ++j) {
                const double th = j * dtheta;
                ring += f({r * std::cos(th), r * std::sin(th)});
            }
            panel += kGlWeights[g] * r * ring * dtheta;
        }
        total += 0.5 * h * panel;
    }
    return total;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Weight make_weight(const WeightSpec& spec) {
    if (spec.family == "gaussian") return gaussian(spec);
    if (spec.family == "constant") return constant(spec);
    if (spec.family == "inverse_quadratic") return inverse_quadratic(spec);
    if (spec.family == "anisotropic") return anisotropic(spec);
    if (spec.family == "zero") return zero(spec);
    throw ValidationError("unknown weight family '" + spec.family + "'");
}

std::vector<Weight> weight_catalog() {
    std::vector<Weight> out;
    for (const char* name : {"gaussian", "constant", "inverse_quadratic", "anisotropic", "zero"})
        out.push_back(make_weight({name, {}}));
    return out;
}

Weight catalog_weight(const std::string& name) { return make_weight({name, {}}); }

double disc_integral(const std::function<double(Vec2)>& f, double radius, int angular_samples) {
    return annulus_integral(f, 0.0, radius, angular_samples);
}

AngularLimit estimate_angular_limit(const Weight& w, const SamplingConfig& cfg) {
    if (cfg.radius_schedule.size() < 2) throw ValidationError("radius schedule needs at least two radii");
    for (std::size_t i = 1; i < cfg.radius_schedule.size(); ++i)
        if (!(cfg.radius_schedule[i] > cfg.radius_schedule[i - 1]))
            throw ValidationError("radius schedule must be strictly increasing");
    if (cfg.angular_samples < 4) throw ValidationError("need at least 4 angular samples");

    AngularLimit out;
    out.radius_schedule = cfg.radius_schedule;
    const std::size_t m = static_cast<std::size_t>(cfg.angular_samples);
    out.thetas.resize(m);
    out.values.resize(m);
    out.tail_variation.resize(m);
    const double last = cfg.radius_schedule.back();
    const double prev = cfg.radius_schedule[cfg.radius_schedule.size() - 2];
    for (std::size_t i = 0; i < m; ++i) {
        const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
        const double c = std::cos(th), s = std::sin(th);
        const double v_last = w.value({last * c, last * s});
        const double v_prev = w.value({prev * c, prev * s});
        out.thetas[i] = th;
        out.values[i] = v_last;
        out.tail_variation[i] = std::abs(v_last - v_prev);
        if (out.tail_variation[i] > cfg.tail_tolerance) out.flagged_thetas.push_back(th);
    }
    return out;
}

double angular_limit_at(const AngularLimit& lim, double theta) {
    const std::size_t m = lim.values.size();
    if (m == 0) throw ValidationError("empty angular limit");
    const double step = 2.0 * kPi / static_cast<double>(m);
    double u = std::fmod(theta, 2.0 * kPi);
    if (u < 0) u += 2.0 * kPi;
    const double pos = u / step;
    const std::size_t i = static_cast<std::size_t>(std::floor(pos)) % m;
    const double frac = pos - std::floor(pos);
    return (1.0 - frac) * lim.values[i] + frac * lim.values[(i + 1) % m];
}

namespace {

double max_adjacent_jump(const std::vector<double>& v) {
    double jump = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        jump = std::max(jump, std::abs(v[(i + 1) % v.size()] - v[i]));
    return jump;
}

IntegrabilityCheck l1_check(const std::function<double(Vec2)>& f, const std::string& target,
                            const SamplingConfig& cfg) {
    IntegrabilityCheck c;
    c.space = "L1";
    c.target = target;
    double r = cfg.l1_radius;
    double acc = annulus_integral(f, 0.0, r, 128);
    c.radii.push_back(r);
    c.estimates.push_back(acc);
    for (int k = 0; k < 2; ++k) {
        acc += annulus_integral(f, r, 2.0 * r, 128);
        r *= 2.0;
        c.radii.push_back(r);
        c.estimates.push_back(acc);
    }
    const double d1 = c.estimates[1] - c.estimates[0];
    const double d2 = c.estimates[2] - c.estimates[1];
    const auto& e = c.estimates;
    const bool converged = std::abs(d1) <= cfg.l1_change * std::abs(e[1]) &&
                           std::abs(d2) <= cfg.l1_change * std::abs(e[2]);
    if (converged || (e[2] == 0.0 && d1 == 0.0)) {
        c.verdict = Verdict::pass;
        c.detail = "converged across two radius doublings";
    } else if (d2 >= 0.95 * d1 && d1 > 0.0) {
        // Increments that do not shrink under doubling: at least logarithmic growth.
        c.verdict = Verdict::fail;
        c.detail = "quadrature increments do not decay under radius doubling";
    } else {
        c.verdict = Verdict::inconclusive;
        c.detail = "quadrature not converged across two radius doublings";
    }
    return c;
}

IntegrabilityCheck linf_check(const std::vector<double>& samples, const std::string& target) {
    IntegrabilityCheck c;
    c.space = "Linf";
    c.target = target;
    double sup = 0.0;
    bool finite = true;
    for (double v : samples) {
        if (!std::isfinite(v)) finite = false;
        else sup = std::max(sup, std::abs(v));
    }
    c.estimates.push_back(finite ? sup : std::numeric_limits<double>::infinity());
    c.verdict = finite ? Verdict::pass : Verdict::fail;
    c.detail = finite ? "sampled supremum finite" : "non-finite sample";
    return c;
}

}  // namespace

AdmissibilityReport check_admissible(const Weight& w, const Power& p, const SamplingConfig& cfg) {
    if (cfg.resolution < 2 || !(cfg.extent > 0)) throw ValidationError("bad sampling grid");
    AdmissibilityReport rep;
    rep.label = w.label;
    rep.p = p.str();
    rep.grid_points_per_side = cfg.resolution;
    rep.grid_extent = cfg.extent;

    rep.nonnegative.verdict = Verdict::pass;
    rep.repulsive.verdict = Verdict::pass;
    rep.nonnegative.extreme = std::numeric_limits<double>::infinity();
    rep.repulsive.extreme = -std::numeric_limits<double>::infinity();
    std::vector<double> values, grads;
    values.reserve(static_cast<std::size_t>(cfg.resolution) * cfg.resolution);
    grads.reserve(values.capacity());
    const double h = 2.0 * cfg.extent / (cfg.resolution - 1);
    for (int i = 0; i < cfg.resolution; ++i) {
        for (int j = 0; j < cfg.resolution; ++j) {
            const Vec2 x{-cfg.extent + j * h, -cfg.extent + i * h};
            const double a = w.value(x);
            const Vec2 g = w.gradient(x);
            const double radial = dot(x, g);
            values.push_back(a);
            grads.push_back(norm(g));
            if (a < rep.nonnegative.extreme) rep.nonnegative.extreme = a;
            if (radial > rep.repulsive.extreme) rep.repulsive.extreme = radial;
            if (a < 0.0 && !rep.nonnegative.witness) {
                rep.nonnegative.verdict = Verdict::fail;
                rep.nonnegative.witness = x;
            }
            if (radial > cfg.sign_tolerance && !rep.repulsive.witness) {
                rep.repulsive.verdict = Verdict::fail;
                rep.repulsive.witness = x;
            }
        }
    }

    // Far-field samples along the radius schedule feed the sup estimates too.
    const AngularLimit lim = estimate_angular_limit(w, cfg);
    for (double r : cfg.radius_schedule) {
        for (double th : lim.thetas) {
            const Vec2 x{r * std::cos(th), r * std::sin(th)};
            values.push_back(w.value(x));
            grads.push_back(norm(w.gradient(x)));
        }
    }

    rep.integrability.push_back(linf_check(values, "a"));
    rep.integrability.push_back(linf_check(grads, "grad a"));
    if (p.value() <= 2) {
        rep.integrability.push_back(l1_check(w.value, "a", cfg));
        rep.integrability.push_back(
            l1_check([&w](Vec2 x) { return norm(w.gradient(x)); }, "grad a", cfg));
    }

    SamplingConfig fine = cfg;
    fine.angular_samples = 2 * cfg.angular_samples;
    const AngularLimit lim_fine = estimate_angular_limit(w, fine);
    rep.modulus_estimate = max_adjacent_jump(lim.values);
    rep.modulus_estimate_fine = max_adjacent_jump(lim_fine.values);
    if (!lim.flagged_thetas.empty() || !lim_fine.flagged_thetas.empty()) {
        rep.atilde_continuous = Verdict::inconclusive;
    } else if (rep.modulus_estimate <= 1e-12 || rep.modulus_estimate_fine <= 0.75 * rep.modulus_estimate) {
        rep.atilde_continuous = Verdict::pass;
    } else {
        rep.atilde_continuous = Verdict::fail;
    }

    bool ok = rep.nonnegative.verdict == Verdict::pass && rep.repulsive.verdict == Verdict::pass &&
              rep.atilde_continuous == Verdict::pass;
    for (const auto& c : rep.integrability) ok = ok && c.verdict == Verdict::pass;
    rep.overall = ok;
    return rep;
}

}  // namespace inls
