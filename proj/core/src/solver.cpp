#include "inls/solver.hpp"

#include "inls/errors.hpp"
#include "inls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace inls {

namespace {

std::vector<cplx> phase_multiplier(const Grid& g, double tau) {
    const int n = g.n();
    std::vector<cplx> m(g.size());
    for (int i = 0; i < n; ++i) {
        const double ky = g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double kx = g.wavenumber(j);
            const double ph = -tau * (kx * kx + ky * ky);
            m[static_cast<std::size_t>(i) * n + j] = {std::cos(ph), std::sin(ph)};
        }
    }
    return m;
}

void multiply(std::span<cplx> s, std::span<const cplx> m) {
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= m[k];
}

double mass_of(std::span<const cplx> u, double cell) {
    double acc = 0.0;
    for (const cplx& z : u) acc += std::norm(z);
    return acc * cell;
}

double sup_sq(std::span<const cplx> u) {
    double m = 0.0;
    for (const cplx& z : u) m = std::max(m, std::norm(z));
    return m;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// |u|^p from m = |u|^2
inline double modulus_power(double m, double p) {
    if (p == 2.0) return m;
    if (p == 1.0) return std::sqrt(m);
    if (p == 3.0) return m * std::sqrt(m);
    if (p == 4.0) return m * m;
    if (p == 0.5) return std::sqrt(std::sqrt(m));
    return std::pow(m, 0.5 * p);
}

std::vector<double> sample_weight(const Weight& w, const Grid& g) {
    if (!w.value) throw ValidationError("solver config has no weight");
    std::vector<double> a(g.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = w.value(g.point(k));
        if (!(a[k] >= 0.0) || !std::isfinite(a[k]))
            throw ValidationError("weight '" + w.label + "' is negative or non-finite on the grid");
    }
    return a;
}

}  // namespace

std::shared_ptr<const Precomputed> precompute(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("dt must be positive");
    if (cfg.snapshot_stride < 1) throw ValidationError("snapshot_stride must be >= 1");
    auto pre = std::make_shared<Precomputed>();
    pre->a = sample_weight(cfg.weight, cfg.grid);
    pre->half_step = phase_multiplier(cfg.grid, 0.5 * cfg.dt);
    pre->full_step = phase_multiplier(cfg.grid, cfg.dt);
    pre->p_value = cfg.p.to_double();
    return pre;
}

StepperState make_state(const SolverConfig& cfg, const Field& u0, double t0) {
    if (!(u0.grid() == cfg.grid)) throw ValidationError("initial data grid does not match the solver grid");
    return {t0, u0, precompute(cfg)};
}

double nonlinear_substep_inplace(std::span<cplx> u, std::span<const double> a, double p, double tau) {
    if (u.size() != a.size()) throw ValidationError("weight samples do not match the field");
    double peak = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double m = std::norm(u[k]);
        finite = finite && std::isfinite(m);
        peak = std::max(peak, m);
        if (a[k] == 0.0) continue;
        const double ph = -tau * a[k] * modulus_power(m, p);
        u[k] *= cplx(std::cos(ph), std::sin(ph));
    }
    return finite ? peak : std::numeric_limits<double>::quiet_NaN();
}

Field nonlinear_substep(const Field& u, std::span<const double> a, const Power& p, double tau) {
    std::vector<cplx> v(u.values().begin(), u.values().end());
    nonlinear_substep_inplace(v, a, p.to_double(), tau);
    return Field(u.grid(), std::move(v));
}

StepperState strang_step(const StepperState& state, const SolverConfig& cfg) {
    const Grid& g = state.u.grid();
    const long step = std::lround(state.t / cfg.dt) + 1;
    std::vector<cplx> s(state.u.spectrum().begin(), state.u.spectrum().end());
    std::vector<cplx> u(g.size());
    multiply(s, state.pre->half_step);
    fft_inverse(g.n(), s, u);
    const double peak = nonlinear_substep_inplace(u, state.pre->a, state.pre->p_value, cfg.dt);
    if (!std::isfinite(peak)) throw NumericalAbort("non-finite values at step " + std::to_string(step), step);
    fft_forward(g.n(), u, s);
    multiply(s, state.pre->half_step);
    return {state.t + cfg.dt, Field::from_spectrum(g, std::move(s)), state.pre};
}

double escape_fraction(const Field& u) {
    const Grid& g = u.grid();
    const double r = 0.25 * g.length();
    double inside = 0.0, outside = 0.0;
    const auto v = u.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec2 x = g.point(k);
        (x.x * x.x + x.y * x.y < r * r ? inside : outside) += std::norm(v[k]);
    }
    const double total = inside + outside;
    return total > 0.0 ? outside / total : 0.0;
}

double top_octave_fraction(const Field& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    const double cut = 0.5 * g.nyquist();
    const auto s = u.spectrum();
    double hi = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ky = g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double kx = g.wavenumber(j);
            const double w = std::norm(s[static_cast<std::size_t>(i) * n + j]);
            total += w;
            if (kx * kx + ky * ky > cut * cut) hi += w;
        }
    }
    return total > 0.0 ? hi / total : 0.0;
}

RunResult run(const SolverConfig& cfg, const Field& u0) {
    if (!(u0.grid() == cfg.grid)) throw ValidationError("initial data grid does not match the solver grid");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw ValidationError("t_end must be >= 0");
    const auto pre = precompute(cfg);
    const long steps = std::lround(cfg.t_end / cfg.dt);
    if (std::abs(static_cast<double>(steps) * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw ValidationError("t_end must be an integer multiple of dt");

    const Grid& g = cfg.grid;
    const double cell = g.cell_area();
    RunMonitors mon;
    mon.initial_mass = mass_of(u0.values(), cell);
    mon.initial_sup = std::sqrt(sup_sq(u0.values()));
    mon.max_sup = mon.initial_sup;

    std::vector<double> times;
    std::vector<Field> snaps;

    auto observe = [&](const Field& f, double t, long k) {
        const double mass = mass_of(f.values(), cell);
        if (mon.initial_mass > 0.0)
            mon.max_mass_drift = std::max(mon.max_mass_drift, std::abs(mass - mon.initial_mass) / mon.initial_mass);
        const double esc = escape_fraction(f);
        mon.max_escape_fraction = std::max(mon.max_escape_fraction, esc);
        if (esc > cfg.escape_threshold) {
            if (!mon.escape_breached) mon.first_escape_time = t;
            mon.escape_breached = true;
            if (cfg.escape_policy == EscapePolicy::abort)
                throw NumericalAbort("domain escape: mass fraction " + fmt(esc) + " outside |x| < L/4 at t = " +
                                         fmt(t) + " (step " + std::to_string(k) + ")",
                                     k);
        }
        const double top = top_octave_fraction(f);
        mon.max_top_octave_fraction = std::max(mon.max_top_octave_fraction, top);
        if (top > cfg.resolution_threshold) mon.resolution_flagged = true;
        times.push_back(t);
        snaps.push_back(f);
    };

    observe(u0, 0.0, 0);

    std::vector<cplx> s(u0.spectrum().begin(), u0.spectrum().end());
    std::vector<cplx> u(g.size());
    bool pending = false;  // s still owes a half free step
    const double sup_limit_sq = std::pow(cfg.blowup_factor * mon.initial_sup, 2);
    for (long k = 1; k <= steps; ++k) {
        multiply(s, pending ? pre->full_step : pre->half_step);
        fft_inverse(g.n(), s, u);
        const double peak = nonlinear_substep_inplace(u, pre->a, pre->p_value, cfg.dt);
        if (!std::isfinite(peak))
            throw NumericalAbort("non-finite values at step " + std::to_string(k), k);
        mon.max_sup = std::max(mon.max_sup, std::sqrt(peak));
        if (mon.initial_sup > 0.0 && peak > sup_limit_sq)
            throw NumericalAbort("blow-up guard: sup |u| = " + fmt(std::sqrt(peak)) + " exceeds " +
                                     fmt(cfg.blowup_factor) + " x initial at step " + std::to_string(k),
                                 k);
        fft_forward(g.n(), u, s);
        mon.steps = k;
        if (k % cfg.snapshot_stride == 0 || k == steps) {
            multiply(s, pre->half_step);
            pending = false;
            observe(Field::from_spectrum(g, s), static_cast<double>(k) * cfg.dt, k);
        } else {
            pending = true;
        }
    }

    TrajectoryMeta meta;
    meta.p = cfg.p.str();
    meta.weight = cfg.weight.spec;
    meta.weight_label = cfg.weight.label;
    meta.solver = {{"dt", fmt(cfg.dt)},
                   {"t_end", fmt(cfg.t_end)},
                   {"snapshot_stride", std::to_string(cfg.snapshot_stride)},
                   {"n", std::to_string(g.n())},
                   {"length", fmt(g.length())},
                   {"escape_policy", cfg.escape_policy == EscapePolicy::abort ? "abort" : "record"},
                   {"scheme", "strang"}};
    return {Trajectory(std::move(times), std::move(snaps), std::move(meta)), mon};
}

DuhamelReport duhamel_residual(const Trajectory& traj, double t0, double t1) {
    const auto idx = traj.window(t0, t1);
    if (idx.size() < 16) throw ValidationError("Duhamel residual needs at least 16 snapshots in the window");
    const Grid& g = traj.grid();
    const int n = g.n();
    const Weight w = make_weight(traj.meta().weight);
    const Power p = Power::parse(traj.meta().p);
    const double pv = p.to_double();
    const ExponentProfile e = exponent_profile(p);
    const double q = e.q.get_d(), r = e.r.get_d(), alpha = e.alpha.get_d(), beta = e.beta.get_d();
    const auto a = sample_weight(w, g);

    const std::size_t size = g.size();
    std::vector<cplx> f(size), fhat(size), fhat_prev(size), d(size, cplx(0.0)), dphys(size);
    std::vector<double> times, lr, lbeta;
    DuhamelReport rep;
    rep.snapshots = idx.size();
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const auto u = traj.snapshots()[idx[m]].values();
        for (std::size_t k = 0; k < size; ++k) f[k] = a[k] * modulus_power(std::norm(u[k]), pv) * u[k];
        fft_forward(n, f, fhat);
        const double tm = traj.times()[idx[m]];
        if (m > 0) {
            const double h = tm - times.back();
            const auto prop = phase_multiplier(g, h);
            for (std::size_t k = 0; k < size; ++k)
                d[k] = prop[k] * (d[k] + 0.5 * h * fhat_prev[k]) + 0.5 * h * fhat[k];
        }
        fft_inverse(n, d, dphys);
        times.push_back(tm);
        lr.push_back(lebesgue_norm(Field(g, dphys), r));
        lbeta.push_back(lebesgue_norm(Field(g, f), beta));
        std::swap(fhat, fhat_prev);
    }

    const Field& u0 = traj.snapshots()[idx.front()];
    const Field& u1 = traj.snapshots()[idx.back()];
    const auto prop = phase_multiplier(g, times.back() - times.front());
    const auto s0 = u0.spectrum(), s1 = u1.spectrum();
    double acc = 0.0;
    for (std::size_t k = 0; k < size; ++k) acc += std::norm(s1[k] - prop[k] * s0[k] + cplx(0.0, 1.0) * d[k]);
    rep.residual = std::sqrt(acc * g.cell_area() / static_cast<double>(size));

    rep.integral_x_norm = time_lebesgue(times, lr, q);
    rep.forcing_y_norm = time_lebesgue(times, lbeta, alpha);
    rep.ratio = rep.forcing_y_norm > 0.0 ? rep.integral_x_norm / rep.forcing_y_norm : 0.0;
    return rep;
}

cplx power_nonlinearity(cplx z, double p) { return std::pow(std::abs(z), p) * z; }

double ratio_difference(cplx c1, cplx c2, double p) {
    const double a1 = std::abs(c1), a2 = std::abs(c2);
    const double den = std::pow(a2, p + 1.0) + a2 * std::pow(a1, p);
    if (den == 0.0) return 0.0;
    return std::abs(power_nonlinearity(c1 + c2, p) - power_nonlinearity(c1, p)) / den;
}

double ratio_sum(std::span<const cplx> c, double p) {
    cplx total = 0.0, separate = 0.0;
    double sum_abs = 0.0, sum_pow = 0.0, diag = 0.0;
    for (const cplx& z : c) {
        total += z;
        separate += power_nonlinearity(z, p);
        const double az = std::abs(z), azp = std::pow(az, p);
        sum_abs += az;
        sum_pow += azp;
        diag += az * azp;
    }
    // sum_{j != k} |c_j| |c_k|^p = (sum |c_j|)(sum |c_k|^p) - sum |c_j|^{p+1}
    const double den = sum_abs * sum_pow - diag;
    if (!(den > 0.0)) return 0.0;
    return std::abs(power_nonlinearity(total, p) - separate) / den;
}

PointwiseReport pointwise_inequality_check(std::span<const cplx> samples, std::size_t terms, double p) {
    if (terms < 2) throw ValidationError("pointwise check needs tuples of at least two entries");
    if (samples.empty() || samples.size() % terms != 0)
        throw ValidationError("sample list must be a nonempty sequence of whole tuples");
    if (!(p > 0.0)) throw ValidationError("p must be positive");
    PointwiseReport rep;
    rep.p = p;
    rep.terms = terms;
    rep.samples = samples.size() / terms;
    for (std::size_t s = 0; s < rep.samples; ++s) {
        const auto tup = samples.subspan(s * terms, terms);
        rep.max_ratio_difference = std::max(rep.max_ratio_difference, ratio_difference(tup[0], tup[1], p));
        rep.max_ratio_sum = std::max(rep.max_ratio_sum, ratio_sum(tup, p));
    }
    return rep;
}

std::vector<cplx> random_pointwise_samples(std::size_t count, std::size_t terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<cplx> out(count * terms);
    for (cplx& z : out) {
        const double mod = std::pow(10.0, -3.0 + 6.0 * unit());
        const double ph = 2.0 * std::numbers::pi * unit();
        z = std::polar(mod, ph);
    }
    return out;
}

}  // namespace inls
