#pragma once

#include "inls/field.hpp"
#include "inls/scaling.hpp"
#include "inls/trajectory.hpp"
#include "inls/weights.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace inls {

/// What to do when the mass outside |x| < L/4 exceeds the escape threshold.
enum class EscapePolicy {
    abort,   ///< throw NumericalAbort
    record,  ///< keep going; the breach is reported in RunMonitors
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_stride = 1;
    Power p{Rational(2)};
    Weight weight;
    Grid grid{256, 64.0};

    EscapePolicy escape_policy = EscapePolicy::abort;
    double escape_threshold = 1e-8;      ///< outside-mass / total-mass
    double resolution_threshold = 1e-8;  ///< top-octave spectral mass / total
    double blowup_factor = 1e3;          ///< sup |u| growth that aborts a run
    bool waive_admissibility = false;
};

/// Cached per-config data: a(x) on the grid and the linear multipliers.
struct Precomputed {
    std::vector<double> a;          ///< weight samples, row-major
    std::vector<cplx> half_step;    ///< e^{-i (dt/2) |xi|^2}
    std::vector<cplx> full_step;    ///< e^{-i dt |xi|^2}
    double p_value = 0.0;
};

std::shared_ptr<const Precomputed> precompute(const SolverConfig& cfg);

struct StepperState {
    double t = 0.0;
    Field u;
    std::shared_ptr<const Precomputed> pre;
};

StepperState make_state(const SolverConfig& cfg, const Field& u0, double t0 = 0.0);

/// u exp(-i tau a |u|^p), pointwise.
Field nonlinear_substep(const Field& u, std::span<const double> a, const Power& p, double tau);
/// In-place variant on raw samples; returns max |u|^2 seen before the update.
double nonlinear_substep_inplace(std::span<cplx> u, std::span<const double> a, double p, double tau);

/// Half free step, nonlinear step, half free step. Throws NumericalAbort on
/// non-finite values (step index = round(t / dt) + 1).
StepperState strang_step(const StepperState& state, const SolverConfig& cfg);

struct RunMonitors {
    long steps = 0;
    double initial_sup = 0.0;
    double max_sup = 0.0;
    double max_escape_fraction = 0.0;
    bool escape_breached = false;
    std::optional<double> first_escape_time;
    double max_top_octave_fraction = 0.0;
    bool resolution_flagged = false;
    double initial_mass = 0.0;
    double max_mass_drift = 0.0;  ///< relative, over snapshots
};

struct RunResult {
    Trajectory trajectory;
    RunMonitors monitors;
};

/// Integrate from u0 at t = 0 to t_end. Records t = 0, every stride-th step
/// and the final step. t_end must be an integer multiple of dt (to 1e-9).
/// Consecutive half steps between snapshots are fused into one full step.
RunResult run(const SolverConfig& cfg, const Field& u0);

/// Mass of u outside |x| < L/4, divided by the total mass (0 for u = 0).
double escape_fraction(const Field& u);
/// Spectral mass with |xi| above half the Nyquist frequency, over the total.
double top_octave_fraction(const Field& u);

struct DuhamelReport {
    double residual = 0.0;        ///< L^2 norm at t1
    double integral_x_norm = 0.0; ///< || int_{t0}^t e^{i(t-s)Lap} F(s) ds ||_X
    double forcing_y_norm = 0.0;  ///< || a |u|^p u ||_Y
    double ratio = 0.0;           ///< integral_x_norm / forcing_y_norm (0 if forcing vanishes)
    std::size_t snapshots = 0;
};

/// u(t1) - e^{i(t1-t0)Lap} u(t0) + i int_{t0}^{t1} e^{i(t1-s)Lap} F(s) ds with
/// F = a |u|^p u and trapezoidal quadrature over the snapshots in the window.
/// The weight and p come from the trajectory metadata. Needs >= 16 snapshots.
DuhamelReport duhamel_residual(const Trajectory& traj, double t0, double t1);

struct PointwiseReport {
    double p = 0.0;
    std::size_t samples = 0;
    std::size_t terms = 0;          ///< J, the tuple length
    double max_ratio_difference = 0.0;  ///< |f(c1+c2)-f(c1)| / (|c2|^{p+1} + |c2||c1|^p)
    double max_ratio_sum = 0.0;         ///< |f(sum c) - sum f(c)| / sum_{j!=k} |c_j||c_k|^p
};

/// f(z) = |z|^p z.
cplx power_nonlinearity(cplx z, double p);
double ratio_difference(cplx c1, cplx c2, double p);
double ratio_sum(std::span<const cplx> c, double p);

/// Each sample is a tuple of J >= 2 complex numbers stored contiguously:
/// samples.size() must be a multiple of terms. The difference form uses the
/// first two entries of each tuple.
PointwiseReport pointwise_inequality_check(std::span<const cplx> samples, std::size_t terms, double p);

/// count tuples of `terms` entries; log-uniform moduli in [1e-3, 1e3] and
/// uniform phases, from a fixed-seed mt19937_64.
std::vector<cplx> random_pointwise_samples(std::size_t count, std::size_t terms, std::uint64_t seed);

}  // namespace inls
