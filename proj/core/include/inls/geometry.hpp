#pragma once

#include "inls/scaling.hpp"
#include "inls/weights.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace inls {

struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Centers x_n = r_n (cos theta_n, sin theta_n) for n = first, first + 1, ...
class TranslationSequence {
public:
    TranslationSequence(int first_index, std::vector<PolarPoint> centers, double limit_angle);

    /// r_n = r(n), theta_n = theta(n) for n in [first, last].
    static TranslationSequence generate(int first, int last, const std::function<double(int)>& r,
                                        const std::function<double(int)>& theta, double limit_angle);

    int first_index() const { return first_; }
    int last_index() const { return first_ + static_cast<int>(centers_.size()) - 1; }
    double limit_angle() const { return limit_angle_; }
    const PolarPoint& polar(int n) const;
    Vec2 center(int n) const;

private:
    int first_;
    std::vector<PolarPoint> centers_;
    double limit_angle_;
};

struct CutoffSample {
    double value = 0.0;
    Vec2 gradient;
    double laplacian = 0.0;
};

/// chi(x) = S((|x + x_n| - R/4) / (R/4)), R = |x_n|: zero on |x + x_n| <= R/4,
/// one on |x + x_n| >= R/2.
class AnnularCutoff {
public:
    AnnularCutoff(int index, Vec2 center);

    int index() const { return index_; }
    Vec2 center() const { return center_; }
    double inner_radius() const { return 0.25 * radius_; }
    double outer_radius() const { return 0.5 * radius_; }

    CutoffSample eval(Vec2 x) const;
    double value(Vec2 x) const { return eval(x).value; }
    bool in_plateau(Vec2 x) const;  ///< |x + x_n| >= R/2
    bool in_hole(Vec2 x) const;     ///< |x + x_n| <= R/4

private:
    int index_;
    Vec2 center_;
    double radius_;
};

AnnularCutoff annular_cutoff(int index, Vec2 center);

/// Thrown when the angle conditions on omega_n fail at the requested n.
class ThresholdError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ThresholdCheck {
    double omega = 0.0;
    bool angle_branch = false;     ///< omega = 17 |theta_n - theta_inf|
    double sin_omega = 0.0;
    double radial_floor = 0.0;     ///< r_n^{-1/(p+2)}
    double angle_ratio = 0.0;      ///< |sin(theta_n - theta_inf) / sin(omega)|
    bool sin_ok = false;           ///< sin(omega) >= r^{-1/(p+2)}
    bool ratio_ok = false;         ///< angle_ratio <= 1/16
    bool acute = false;            ///< omega < pi/2
    bool reached() const { return sin_ok && ratio_ok && acute; }
};

ThresholdCheck triangular_threshold(double r, double theta, double theta_inf, double p);

/// Triangular cutoff for one index. In the frame rotated by -theta_inf,
///   T1 = { r >= x - r/2 >= cot(omega)|y| },
///   T2 = { r(5 + sin omega)/4 >= x - r/4 >= cot(omega)|y| },
/// and chi_n(x) = prod_e S(h_e(x + x_n) / d), d = r sin(omega) / 4, over the
/// three edges of T2 (h_e = distance inside the edge). So chi_n = 1 when
/// x + x_n is in T1 and 0 when it is outside T2.
class TriangularCutoff {
public:
    TriangularCutoff(int index, PolarPoint center, double theta_inf, double p);

    int index() const { return index_; }
    double r() const { return r_; }
    double theta() const { return theta_; }
    double theta_inf() const { return theta_inf_; }
    double omega() const { return threshold_.omega; }
    double p() const { return p_; }
    const ThresholdCheck& threshold() const { return threshold_; }
    Vec2 center() const;

    /// r sin(omega) / 4
    double gap() const { return 0.25 * r_ * std::sin(threshold_.omega); }
    /// Min over the vertices of T1 of the distance to the edge lines of T2.
    double separation() const;

    /// chi(x - x_n): the cutoff in absolute position, supported in T2.
    CutoffSample eval_absolute(Vec2 X) const;
    /// chi_n(x).
    CutoffSample eval(Vec2 x) const;

    /// Same evaluation in the rotated frame scaled by 1/r (xi = X_rot / r);
    /// derivatives are with respect to xi.
    CutoffSample eval_scaled(Vec2 xi) const;

    bool in_t1_absolute(Vec2 X) const;
    bool in_t2_absolute(Vec2 X) const;

    double t1_area() const;  ///< r^2 tan(omega)
    double t2_area() const;  ///< (r(5 + sin omega)/4)^2 tan(omega)

    Vec2 to_rotated(Vec2 X) const;
    Vec2 from_rotated(Vec2 Y) const;

private:
    int index_;
    double r_, theta_, theta_inf_, p_;
    ThresholdCheck threshold_;
};

/// Throws ThresholdError if the conditions on omega fail at n.
TriangularCutoff triangular_cutoff(int n, const TranslationSequence& seq, const Power& p);

/// int over T2 (rotated, scaled frame) of f(xi); composite Gauss-Legendre
/// on pieces split at the transition strips.
double integrate_t2_scaled(const TriangularCutoff& c, const std::function<double(Vec2)>& f, int panels = 24);

struct CutoffVerifyConfig {
    double test_extent = 4.0;   ///< C1 grid [-e, e]^2
    int test_points = 41;
    int support_samples = 161;  ///< C2 grid per side over T2
    int quadrature_panels = 24;
    std::size_t area_samples = 200000;
    std::uint64_t seed = 20240601;
    double band = 2.0;          ///< C3 factor band
    double slope_tolerance = 0.15;
};

struct CutoffEntry {
    int n = 0;
    double r = 0.0;
    double theta = 0.0;
    ThresholdCheck threshold;
    double gap = 0.0;
    double separation = 0.0;
    double separation_floor = 0.0;  ///< r^{(p+1)/(p+2)} / 4

    double c1_min = 0.0;            ///< min chi_n on the test grid
    bool c1 = false;
    double c2_sup = 0.0;            ///< sup |a - a~(theta_inf)| over T2
    bool c2 = false;
    double grad_norm = 0.0;         ///< ||grad chi||_{L^s}, s = 2 beta / (2 - beta)
    double lap_norm = 0.0;          ///< ||Lap chi||_{L^s}
    double grad_scaled = 0.0;       ///< grad_norm * r^{1/(p+2)}
    double lap_scaled = 0.0;        ///< lap_norm * r
    bool c3 = false;
    double sup_grad = 0.0;          ///< sampled sup |grad chi| * r^{(p+1)/(p+2)}
    double sup_lap = 0.0;           ///< sampled sup |Lap chi| * r^{2(p+1)/(p+2)}

    double area_exact = 0.0;        ///< |T2 \ T1|
    double area_monte_carlo = 0.0;
    double area_constant = 0.0;     ///< area_exact / r^2
};

struct CutoffReport {
    std::string p;
    double theta_inf = 0.0;
    double atilde_limit = 0.0;
    double lebesgue_exponent = 0.0;  ///< 2 beta / (2 - beta)
    std::vector<int> below_threshold;
    int threshold_index = 0;         ///< first n from which every listed n passes
    std::vector<CutoffEntry> entries;
    double grad_slope = 0.0;
    double lap_slope = 0.0;
    double grad_slope_target = 0.0;  ///< -1/(p+2)
    bool c1 = false, c2 = false, c3 = false;
    bool slope_ok = false;
    bool all_pass() const { return c1 && c2 && c3 && slope_ok; }
};

/// Runs C1-C3 on every n of n_list at or past the threshold. The angular
/// limit supplies a~(theta_inf).
CutoffReport verify_cutoff_properties(const TranslationSequence& seq, const Power& p, const Weight& w,
                                      const AngularLimit& limit, const std::vector<int>& n_list,
                                      const CutoffVerifyConfig& cfg = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace inls
