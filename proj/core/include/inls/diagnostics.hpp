#pragma once

#include "inls/field.hpp"
#include "inls/solver.hpp"
#include "inls/trajectory.hpp"
#include "inls/weights.hpp"

#include <span>
#include <string>
#include <vector>

namespace inls {

double mass(const Field& u);
/// 1/2 int |grad u|^2, from the spectrum.
double kinetic_energy(const Field& u);
/// int a |u|^{p+2} / (p+2) with a sampled on u's grid.
double potential_energy(const Field& u, std::span<const double> a, double p);

std::vector<double> sample_on_grid(const Weight& w, const Grid& g);

struct ConservedReport {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> kinetic;
    std::vector<double> potential;
    std::vector<double> energy;

    double max_mass_drift() const;    ///< relative to mass[0]
    double max_energy_drift() const;  ///< absolute
};

/// Weight and p are rebuilt from the trajectory metadata.
ConservedReport conserved(const Trajectory& traj);
ConservedReport conserved(const Trajectory& traj, const Weight& w, double p);

/// || t^{1/2} (x + 2it grad) f / (<t>^3 + |x|^3)^{1/2} ||_{L^2}, <t> = (1+t^2)^{1/2}.
/// weightless: plain || (x + 2it grad) f ||_{L^2}. Rejects t < 1.
double z_norm(const Field& f, double t, bool weightless = false);

/// || 2t grad(e^{-i|x|^2/4t} f) ||_{L^2}. Equal to the weightless Z norm for
/// f localized well inside the box and resolved after the chirp.
double z_gauge_side(const Field& f, double t);

struct MorawetzReport {
    std::vector<double> times;       ///< snapshot times >= 1
    std::vector<double> z_norm_sq;
    std::vector<double> running;     ///< int_1^{times[k]} ||u||_Z^2 dt/t
    double integral = 0.0;           ///< running.back()
    double infimum = 0.0;            ///< min ||u(t)||_{Z(t)}

    /// Running integral at the snapshot nearest to T.
    double integral_at(double T) const;
};

/// Trapezoid in t over the snapshots with t >= 1 (at least 32 of them).
MorawetzReport morawetz(const Trajectory& traj);

enum class ScatteringVerdict { consistent, inconclusive };
std::string to_string(ScatteringVerdict v);

struct ScatteringReport {
    std::vector<double> times;
    std::vector<double> potential_energy;
    std::vector<double> dyadic_times;      ///< 1, 2, 4, ... present in the trajectory
    std::vector<double> pullback_drift;    ///< H^1 drift between successive dyadic times
    std::vector<double> x_norm_accumulation;  ///< X norm over [0, dyadic_times[k]]
    double potential_decay = 0.0;          ///< max potential / final potential
    bool drift_monotone = false;
    ScatteringVerdict verdict = ScatteringVerdict::inconclusive;
    std::string detail;
};

struct ScatteringCriteria {
    double potential_decay = 10.0;
    int monotone_pairs = 3;
    double snapshot_density = 8.0;  ///< for the X norm accumulation
};

/// Needs a trajectory reaching t >= 16 that starts at t = 0.
ScatteringReport scattering_probe(const Trajectory& traj, const ScatteringCriteria& crit = {});

struct PerturbationReport {
    double delta_h1 = 0.0;
    double x_difference = 0.0;  ///< || u - u~ ||_X over [0, t_end]
    double ratio = 0.0;         ///< x_difference / delta_h1
    RunMonitors base;
    RunMonitors perturbed;
};

/// Runs u0 and u0 + delta under cfg and compares them in X. The X norm uses
/// every snapshot (cfg.snapshot_stride sets the time resolution).
PerturbationReport perturbation_experiment(const SolverConfig& cfg, const Field& u0, const Field& delta);

/// X norm of the difference of two trajectories recorded at the same times.
double x_norm_difference(const Trajectory& a, const Trajectory& b, const ExponentProfile& e);

}  // namespace inls
