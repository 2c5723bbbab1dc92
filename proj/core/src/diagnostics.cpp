#include "inls/diagnostics.hpp"

#include "inls/errors.hpp"
#include "inls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inls {

double mass(const Field& u) {
    double acc = 0.0;
    for (const cplx& z : u.values()) acc += std::norm(z);
    return acc * u.grid().cell_area();
}

double kinetic_energy(const Field& u) {
    const double g = sobolev_norm(u, 1.0, true);
    return 0.5 * g * g;
}

double potential_energy(const Field& u, std::span<const double> a, double p) {
    const auto v = u.values();
    if (a.size() != v.size()) throw ValidationError("weight samples do not match the field");
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (a[k] == 0.0) continue;
        acc += a[k] * std::pow(std::norm(v[k]), 0.5 * (p + 2.0));
    }
    return acc * u.grid().cell_area() / (p + 2.0);
}

std::vector<double> sample_on_grid(const Weight& w, const Grid& g) {
    std::vector<double> a(g.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = w.value(g.point(k));
    return a;
}

double ConservedReport::max_mass_drift() const {
    double m = 0.0;
    if (mass.empty() || mass.front() == 0.0) return 0.0;
    for (double v : mass) m = std::max(m, std::abs(v - mass.front()) / mass.front());
    return m;
}

double ConservedReport::max_energy_drift() const {
    double m = 0.0;
    for (double v : energy) m = std::max(m, std::abs(v - energy.front()));
    return m;
}

ConservedReport conserved(const Trajectory& traj, const Weight& w, double p) {
    ConservedReport rep;
    const auto a = sample_on_grid(w, traj.grid());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Field& u = traj.snapshots()[k];
        rep.times.push_back(traj.times()[k]);
        rep.mass.push_back(mass(u));
        rep.kinetic.push_back(kinetic_energy(u));
        rep.potential.push_back(potential_energy(u, a, p));
        rep.energy.push_back(rep.kinetic.back() + rep.potential.back());
    }
    return rep;
}

ConservedReport conserved(const Trajectory& traj) {
    return conserved(traj, make_weight(traj.meta().weight), Power::parse(traj.meta().p).to_double());
}

double z_norm(const Field& f, double t, bool weightless) {
    if (!(t >= 1.0)) throw ValidationError("Z(t) norm is defined here for t >= 1");
    const auto grad = spectral_gradient(f);
    const Grid& g = f.grid();
    const auto v = f.values(), gx = grad[0].values(), gy = grad[1].values();
    const cplx two_it(0.0, 2.0 * t);
    const double bracket3 = std::pow(1.0 + t * t, 1.5);
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec2 x = g.point(k);
        const cplx cx = x.x * v[k] + two_it * gx[k];
        const cplx cy = x.y * v[k] + two_it * gy[k];
        const double num = std::norm(cx) + std::norm(cy);
        if (weightless) {
            acc += num;
        } else {
            const double r = std::hypot(x.x, x.y);
            acc += num / (bracket3 + r * r * r);
        }
    }
    acc *= g.cell_area();
    if (!weightless) acc *= t;
    return std::sqrt(acc);
}

double z_gauge_side(const Field& f, double t) {
    if (!(t >= 1.0)) throw ValidationError("Z(t) norm is defined here for t >= 1");
    const Grid& g = f.grid();
    std::vector<cplx> w(g.size());
    const auto v = f.values();
    for (std::size_t k = 0; k < w.size(); ++k) {
        const Vec2 x = g.point(k);
        const double ph = -(x.x * x.x + x.y * x.y) / (4.0 * t);
        w[k] = v[k] * cplx(std::cos(ph), std::sin(ph));
    }
    const auto grad = spectral_gradient(Field(g, std::move(w)));
    double acc = 0.0;
    for (const auto& comp : grad)
        for (const cplx& z : comp.values()) acc += std::norm(z);
    return 2.0 * t * std::sqrt(acc * g.cell_area());
}

double MorawetzReport::integral_at(double T) const {
    if (times.empty()) throw ValidationError("empty Morawetz report");
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - T) < std::abs(times[best] - T)) best = k;
    return running[best];
}

MorawetzReport morawetz(const Trajectory& traj) {
    MorawetzReport rep;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times()[k];
        if (t < 1.0 - 1e-12) continue;
        const double z = z_norm(traj.snapshots()[k], std::max(t, 1.0));
        rep.times.push_back(t);
        rep.z_norm_sq.push_back(z * z);
    }
    if (rep.times.size() < 32) throw ValidationError("Morawetz integral needs at least 32 snapshots with t >= 1");
    rep.running.assign(rep.times.size(), 0.0);
    rep.infimum = std::sqrt(rep.z_norm_sq.front());
    for (std::size_t k = 1; k < rep.times.size(); ++k) {
        const double h = rep.times[k] - rep.times[k - 1];
        rep.running[k] = rep.running[k - 1] +
                         0.5 * h * (rep.z_norm_sq[k - 1] / rep.times[k - 1] + rep.z_norm_sq[k] / rep.times[k]);
        rep.infimum = std::min(rep.infimum, std::sqrt(rep.z_norm_sq[k]));
    }
    rep.integral = rep.running.back();
    return rep;
}

std::string to_string(ScatteringVerdict v) {
    return v == ScatteringVerdict::consistent ? "scattering-consistent" : "inconclusive";
}

namespace {

Field pullback(const Field& u, double t) { return free_propagate(u, -t); }

}  // namespace

ScatteringReport scattering_probe(const Trajectory& traj, const ScatteringCriteria& crit) {
    if (traj.times().back() < 16.0 - 1e-9) throw ValidationError("scattering probe needs a trajectory reaching t >= 16");
    if (std::abs(traj.times().front()) > 1e-12) throw ValidationError("scattering probe needs the trajectory to start at t = 0");
    ScatteringReport rep;
    const Weight w = make_weight(traj.meta().weight);
    const Power p = Power::parse(traj.meta().p);
    const auto a = sample_on_grid(w, traj.grid());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        rep.times.push_back(traj.times()[k]);
        rep.potential_energy.push_back(potential_energy(traj.snapshots()[k], a, p.to_double()));
    }

    const double tol = 1e-9 * std::max(1.0, traj.times().back());
    std::vector<std::size_t> idx;
    for (double t = 1.0; t <= traj.times().back() + tol; t *= 2.0) {
        try {
            idx.push_back(traj.index_at(t, tol));
            rep.dyadic_times.push_back(t);
        } catch (const ValidationError&) {
            throw ValidationError("scattering probe needs a snapshot at every dyadic time; missing t = " +
                                  std::to_string(t));
        }
    }

    const double h1 = sobolev_norm(traj.snapshots().front(), 1.0, false);
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const Field a0 = pullback(traj.snapshots()[idx[k]], rep.dyadic_times[k]);
        const Field a1 = pullback(traj.snapshots()[idx[k + 1]], rep.dyadic_times[k + 1]);
        rep.pullback_drift.push_back(sobolev_norm(a1 - a0, 1.0, false));
    }

    const ExponentProfile e = exponent_profile(p);
    for (double t : rep.dyadic_times) rep.x_norm_accumulation.push_back(x_norm(traj, e, 0.0, t, crit.snapshot_density));

    const double peak = *std::max_element(rep.potential_energy.begin(), rep.potential_energy.end());
    const double last = rep.potential_energy.back();
    bool decay_ok;
    if (peak == 0.0) {
        rep.potential_decay = std::numeric_limits<double>::infinity();
        decay_ok = true;
    } else {
        rep.potential_decay = last > 0.0 ? peak / last : std::numeric_limits<double>::infinity();
        decay_ok = rep.potential_decay >= crit.potential_decay;
    }

    const std::size_t pairs = rep.pullback_drift.size();
    const double floor = 1e-12 * std::max(h1, 1e-300);
    rep.drift_monotone = pairs >= static_cast<std::size_t>(crit.monotone_pairs);
    if (rep.drift_monotone) {
        for (std::size_t k = pairs - crit.monotone_pairs + 1; k < pairs; ++k) {
            const double prev = rep.pullback_drift[k - 1], cur = rep.pullback_drift[k];
            if (!(cur < prev || cur <= floor)) rep.drift_monotone = false;
        }
    }

    rep.verdict = decay_ok && rep.drift_monotone ? ScatteringVerdict::consistent : ScatteringVerdict::inconclusive;
    rep.detail = "potential decay " + std::to_string(rep.potential_decay) + (decay_ok ? " (ok)" : " (below threshold)") +
                 "; drift over last " + std::to_string(crit.monotone_pairs) + " dyadic pairs " +
                 (rep.drift_monotone ? "decreasing" : "not decreasing");
    return rep;
}

double x_norm_difference(const Trajectory& a, const Trajectory& b, const ExponentProfile& e) {
    if (a.size() != b.size()) throw ValidationError("trajectories differ in length");
    std::vector<double> lr;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.times()[k] != b.times()[k]) throw ValidationError("trajectories sampled at different times");
        lr.push_back(lebesgue_norm(a.snapshots()[k] - b.snapshots()[k], e.r.get_d()));
    }
    return time_lebesgue(a.times(), lr, e.q.get_d());
}

PerturbationReport perturbation_experiment(const SolverConfig& cfg, const Field& u0, const Field& delta) {
    PerturbationReport rep;
    rep.delta_h1 = sobolev_norm(delta, 1.0, false);
    const RunResult base = run(cfg, u0);
    const RunResult pert = run(cfg, u0 + delta);
    rep.base = base.monitors;
    rep.perturbed = pert.monitors;
    rep.x_difference = x_norm_difference(base.trajectory, pert.trajectory, exponent_profile(cfg.p));
    rep.ratio = rep.delta_h1 > 0.0 ? rep.x_difference / rep.delta_h1 : 0.0;
    return rep;
}

}  // namespace inls
