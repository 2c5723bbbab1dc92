#pragma once

#include "inls/field.hpp"
#include "inls/scaling.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace inls {

struct TrajectoryMeta {
    std::string p;             ///< rational text, e.g. "3/2"
    WeightSpec weight;
    std::string weight_label;
    std::map<std::string, std::string> solver;  ///< dt, stride, ... as text
};

/// Time-ordered snapshots on one grid.
class Trajectory {
public:
    Trajectory(std::vector<double> times, std::vector<Field> snapshots, TrajectoryMeta meta);

    const std::vector<double>& times() const { return times_; }
    const std::vector<Field>& snapshots() const { return snapshots_; }
    const TrajectoryMeta& meta() const { return meta_; }
    const Grid& grid() const { return snapshots_.front().grid(); }
    std::size_t size() const { return times_.size(); }

    /// Indices of snapshots with t0 <= t <= t1 (up to rounding of the times).
    std::vector<std::size_t> window(double t0, double t1) const;
    /// Index of the snapshot at time t, or throws if none lies within tol.
    std::size_t index_at(double t, double tol) const;

private:
    std::vector<double> times_;
    std::vector<Field> snapshots_;
    TrajectoryMeta meta_;
};

struct NormSpec {
    double time_exponent = 2.0;
    double space_exponent = 2.0;
    double t0 = 0.0;
    double t1 = 1.0;
};

/// || ||u(t)||_{L^space} ||_{L^time([t0, t1])} with trapezoidal time
/// quadrature of ||u(t)||^time. Requires at least two snapshots in the
/// window and a spacing no coarser than 1 / min_density.
double spacetime_norm(const Trajectory& traj, const NormSpec& spec, double min_density = 8.0);

double x_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1, double min_density = 8.0);
double y_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1, double min_density = 8.0);
/// L^{q/2}_t L^{r/2}_x.
double xprime_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1,
                   double min_density = 8.0);

/// Same quadrature for a precomputed series of spatial norms.
double time_lebesgue(const std::vector<double>& times, const std::vector<double>& spatial, double exponent);

struct SnapshotRecord {
    Field field;
    double time = 0.0;
    std::string p;
    std::string weight_label;
};

/// Binary snapshot: "INLSSNAP" magic, u32 version, u32 n, f64 L, f64 time,
/// length-prefixed p and weight label, u64 count, then count (re, im) f64
/// pairs in row-major order. Everything little-endian.
void write_snapshot(const std::filesystem::path& path, const SnapshotRecord& rec);
SnapshotRecord read_snapshot(const std::filesystem::path& path);

/// Directory form: trajectory.json (times, files, metadata) plus one
/// snapshot file per time.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace inls
