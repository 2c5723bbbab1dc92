#pragma once

#include "inls/scaling.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace inls {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Closed-form norms of a weight, when known. Infinite entries mean the
/// weight is not in that space.
struct AnalyticNorms {
    double l1 = 0.0;
    double linf = 0.0;
    double gradient_l1 = 0.0;
    double gradient_linf = 0.0;
    /// ||a||_{L^rho} as a function of rho >= 1 (rho = inf allowed).
    std::function<double(double)> lrho;
};

/// Catalog family plus parameters; enough to rebuild a Weight from a config
/// file or a run manifest.
struct WeightSpec {
    std::string family;
    std::map<std::string, double> params;
};

/// The inhomogeneity a(x). Value and gradient are analytic closures; both
/// must be safe to call concurrently.
struct Weight {
    std::string label;
    WeightSpec spec;
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;
    std::optional<AnalyticNorms> analytic_norms;
};

/// Families: gaussian, constant, inverse_quadratic, anisotropic, zero.
/// Unknown families or parameters throw ValidationError.
Weight make_weight(const WeightSpec& spec);

/// The built-in weights with default parameters.
std::vector<Weight> weight_catalog();
Weight catalog_weight(const std::string& name);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct SamplingConfig {
    double extent = 20.0;        ///< sign checks on [-extent, extent]^2
    int resolution = 401;        ///< grid points per side
    double sign_tolerance = 1e-12;
    double l1_radius = 20.0;     ///< first radius of the L^1 doubling test
    double l1_change = 0.01;     ///< relative change allowed per doubling
    int angular_samples = 256;
    std::vector<double> radius_schedule{10, 20, 40, 80, 160, 320, 640, 1280};
    double tail_tolerance = 1e-6;
};

struct SignCheck {
    Verdict verdict = Verdict::inconclusive;
    std::optional<Vec2> witness;  ///< first violating sample, if any
    double extreme = 0.0;         ///< min a, or max x.grad a
};

struct IntegrabilityCheck {
    std::string space;   ///< "L1" or "Linf"
    std::string target;  ///< "a" or "grad a"
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> radii;      ///< L^1 only
    std::vector<double> estimates;  ///< running quadrature values, or the sampled sup
    std::string detail;
};

struct AngularLimit {
    std::vector<double> thetas;
    std::vector<double> values;
    std::vector<double> radius_schedule;
    std::vector<double> tail_variation;
    std::vector<double> flagged_thetas;  ///< tail variation above tolerance
};

AngularLimit estimate_angular_limit(const Weight& w, const SamplingConfig& cfg);

/// Periodic linear interpolation of the sampled limit.
double angular_limit_at(const AngularLimit& lim, double theta);

struct AdmissibilityReport {
    std::string label;
    std::string p;
    SignCheck nonnegative;
    SignCheck repulsive;
    std::vector<IntegrabilityCheck> integrability;
    Verdict atilde_continuous = Verdict::inconclusive;
    double modulus_estimate = 0.0;       ///< max adjacent jump of a-tilde on the angular grid
    double modulus_estimate_fine = 0.0;  ///< same on the doubled grid
    int grid_points_per_side = 0;
    double grid_extent = 0.0;
    bool overall = false;
};

AdmissibilityReport check_admissible(const Weight& w, const Power& p, const SamplingConfig& cfg);

/// Polar quadrature of f over the disc of radius R (composite Gauss-Legendre
/// in r, trapezoid in theta).
double disc_integral(const std::function<double(Vec2)>& f, double radius, int angular_samples = 128);

}  // namespace inls
