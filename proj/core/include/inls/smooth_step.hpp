#pragma once

namespace inls {

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from e^{-1/t}.
/// Every smooth cutoff in the library (dyadic multipliers, annular and
/// triangular cutoffs) is a composition of this one profile.
struct SmoothStep {
    double value;
    double d1;
    double d2;
};

SmoothStep smooth_step(double t);

inline double smooth_step_value(double t) { return smooth_step(t).value; }

/// Radial bump: 1 on [0, 1], 0 on [2, inf).
inline double dyadic_bump(double r) { return smooth_step_value(2.0 - r); }

}  // namespace inls
