#include "inls/smooth_step.hpp"

#include <cmath>

namespace inls {

namespace {

struct Flat {
    double g, g1, g2;
};

// g(t) = exp(-1/t) for t > 0 with its first two derivatives.
Flat flat(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    const double g = std::exp(-1.0 / t);
    const double inv = 1.0 / t;
    const double inv2 = inv * inv;
    return {g, g * inv2, g * (inv2 * inv2 - 2.0 * inv2 * inv)};
}

}  // namespace

SmoothStep smooth_step(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    const Flat a = flat(t);
    const Flat b0 = flat(1.0 - t);
    // B(t) = g(1 - t): chain rule flips the sign of the odd derivative.
    const double b = b0.g, b1 = -b0.g1, b2 = b0.g2;
    const double den = a.g + b;
    const double num1 = a.g1 * b - a.g * b1;
    const double value = a.g / den;
    const double d1 = num1 / (den * den);
    const double d2 = (a.g2 * b - a.g * b2) / (den * den) - 2.0 * num1 * (a.g1 + b1) / (den * den * den);
    return {value, d1, d2};
}

}  // namespace inls
