#include "inls/geometry.hpp"

#include "inls/errors.hpp"
#include "inls/smooth_step.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace inls {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(double a, double b, int panels, F&& f) {
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = a + (k + 0.5) * h;
        for (std::size_t i = 0; i < kGlNodes.size(); ++i) acc += kGlWeights[i] * f(mid + 0.5 * h * kGlNodes[i]);
    }
    return 0.5 * h * acc;
}

}  // namespace

TranslationSequence::TranslationSequence(int first_index, std::vector<PolarPoint> centers, double limit_angle)
    : first_(first_index), centers_(std::move(centers)), limit_angle_(limit_angle) {
    if (centers_.empty()) throw ValidationError("translation sequence is empty");
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        if (!(centers_[i].r > 0.0) || !std::isfinite(centers_[i].r))
            throw ValidationError("translation radii must be positive");
        if (i > 0 && !(centers_[i].r > centers_[i - 1].r))
            throw ValidationError("translation radii must be strictly increasing");
    }
}

TranslationSequence TranslationSequence::generate(int first, int last, const std::function<double(int)>& r,
                                                  const std::function<double(int)>& theta, double limit_angle) {
    if (last < first) throw ValidationError("empty index range");
    std::vector<PolarPoint> c;
    for (int n = first; n <= last; ++n) c.push_back({r(n), theta(n)});
    return TranslationSequence(first, std::move(c), limit_angle);
}

const PolarPoint& TranslationSequence::polar(int n) const {
    if (n < first_index() || n > last_index())
        throw ValidationError("index " + std::to_string(n) + " outside the stored prefix");
    return centers_[static_cast<std::size_t>(n - first_)];
}

Vec2 TranslationSequence::center(int n) const {
    const PolarPoint& q = polar(n);
    return {q.r * std::cos(q.theta), q.r * std::sin(q.theta)};
}

// ---------------------------------------------------------------- annular

AnnularCutoff::AnnularCutoff(int index, Vec2 center) : index_(index), center_(center), radius_(norm(center)) {
    if (!(radius_ > 0.0)) throw ValidationError("annular cutoff needs a nonzero center");
}

AnnularCutoff annular_cutoff(int index, Vec2 center) { return AnnularCutoff(index, center); }

bool AnnularCutoff::in_plateau(Vec2 x) const { return norm({x.x + center_.x, x.y + center_.y}) >= outer_radius(); }
bool AnnularCutoff::in_hole(Vec2 x) const { return norm({x.x + center_.x, x.y + center_.y}) <= inner_radius(); }

CutoffSample AnnularCutoff::eval(Vec2 x) const {
    const Vec2 z{x.x + center_.x, x.y + center_.y};
    const double rho = norm(z);
    const double w = 0.25 * radius_;
    const SmoothStep s = smooth_step((rho - w) / w);
    CutoffSample out;
    out.value = s.value;
    if (s.d1 == 0.0 && s.d2 == 0.0) return out;
    const double f1 = s.d1 / w, f2 = s.d2 / (w * w);
    out.gradient = {f1 * z.x / rho, f1 * z.y / rho};
    out.laplacian = f2 + f1 / rho;
    return out;
}

// ------------------------------------------------------------- triangular

ThresholdCheck triangular_threshold(double r, double theta, double theta_inf, double p) {
    if (!(r >= 1.0)) throw ValidationError("triangular cutoff needs r_n >= 1");
    ThresholdCheck t;
    const double dtheta = std::remainder(theta - theta_inf, 2.0 * kPi);
    t.radial_floor = std::pow(r, -1.0 / (p + 2.0));
    const double by_angle = 17.0 * std::abs(dtheta);
    const double by_radius = std::asin(t.radial_floor);
    t.angle_branch = by_angle > by_radius;
    t.omega = std::max(by_angle, by_radius);
    t.sin_omega = std::sin(t.omega);
    t.acute = t.omega < 0.5 * kPi;
    t.sin_ok = t.sin_omega >= t.radial_floor * (1.0 - 1e-15);
    t.angle_ratio = t.sin_omega > 0.0 ? std::abs(std::sin(dtheta) / t.sin_omega) : std::numeric_limits<double>::infinity();
    t.ratio_ok = t.angle_ratio <= 1.0 / 16.0;
    return t;
}

TriangularCutoff::TriangularCutoff(int index, PolarPoint center, double theta_inf, double p)
    : index_(index), r_(center.r), theta_(center.theta), theta_inf_(theta_inf), p_(p),
      threshold_(triangular_threshold(center.r, center.theta, theta_inf, p)) {}

TriangularCutoff triangular_cutoff(int n, const TranslationSequence& seq, const Power& p) {
    TriangularCutoff c(n, seq.polar(n), seq.limit_angle(), p.to_double());
    const ThresholdCheck& t = c.threshold();
    if (!t.reached()) {
        std::string why;
        if (!t.acute) why += " omega >= pi/2;";
        if (!t.sin_ok) why += " sin(omega) < r^{-1/(p+2)};";
        if (!t.ratio_ok) why += " |sin(theta_n - theta_inf)/sin(omega)| = " + std::to_string(t.angle_ratio) + " > 1/16;";
        throw ThresholdError("threshold not reached at n = " + std::to_string(n) + ":" + why);
    }
    return c;
}

Vec2 TriangularCutoff::center() const { return {r_ * std::cos(theta_), r_ * std::sin(theta_)}; }

Vec2 TriangularCutoff::to_rotated(Vec2 X) const {
    const double c = std::cos(theta_inf_), s = std::sin(theta_inf_);
    return {c * X.x + s * X.y, -s * X.x + c * X.y};
}

Vec2 TriangularCutoff::from_rotated(Vec2 Y) const {
    const double c = std::cos(theta_inf_), s = std::sin(theta_inf_);
    return {c * Y.x - s * Y.y, s * Y.x + c * Y.y};
}

CutoffSample TriangularCutoff::eval_scaled(Vec2 xi) const {
    const double s = threshold_.sin_omega, c = std::cos(threshold_.omega);
    const double d = 0.25 * s;
    const std::array<double, 3> h{(xi.x - 0.25) * s - xi.y * c, (xi.x - 0.25) * s + xi.y * c, 1.5 + d - xi.x};
    const std::array<Vec2, 3> nrm{Vec2{s, -c}, Vec2{s, c}, Vec2{-1.0, 0.0}};
    std::array<SmoothStep, 3> st{smooth_step(h[0] / d), smooth_step(h[1] / d), smooth_step(h[2] / d)};

    CutoffSample out;
    out.value = st[0].value * st[1].value * st[2].value;
    const double id = 1.0 / d, id2 = id * id;
    for (int e = 0; e < 3; ++e) {
        const double others = st[(e + 1) % 3].value * st[(e + 2) % 3].value;
        const double g = st[e].d1 * id * others;
        out.gradient.x += g * nrm[e].x;
        out.gradient.y += g * nrm[e].y;
        out.laplacian += st[e].d2 * id2 * others;
    }
    for (int e = 0; e < 3; ++e) {
        for (int f = e + 1; f < 3; ++f) {
            const int third = 3 - e - f;
            out.laplacian += 2.0 * st[e].d1 * st[f].d1 * id2 * dot(nrm[e], nrm[f]) * st[third].value;
        }
    }
    return out;
}

CutoffSample TriangularCutoff::eval_absolute(Vec2 X) const {
    const Vec2 Y = to_rotated(X);
    CutoffSample s = eval_scaled({Y.x / r_, Y.y / r_});
    const Vec2 g = from_rotated(s.gradient);
    s.gradient = {g.x / r_, g.y / r_};
    s.laplacian /= r_ * r_;
    return s;
}

CutoffSample TriangularCutoff::eval(Vec2 x) const {
    // xi = rot(x + x_n) / r, assembled without forming x + x_n at full scale
    const Vec2 Y = to_rotated(x);
    const double a = theta_ - theta_inf_;
    CutoffSample s = eval_scaled({Y.x / r_ + std::cos(a), Y.y / r_ + std::sin(a)});
    const Vec2 g = from_rotated(s.gradient);
    s.gradient = {g.x / r_, g.y / r_};
    s.laplacian /= r_ * r_;
    return s;
}

bool TriangularCutoff::in_t1_absolute(Vec2 X) const {
    const Vec2 Y = to_rotated(X);
    const double cot = 1.0 / std::tan(threshold_.omega);
    const double u = Y.x - 0.5 * r_;
    return r_ >= u && u >= cot * std::abs(Y.y);
}

bool TriangularCutoff::in_t2_absolute(Vec2 X) const {
    const Vec2 Y = to_rotated(X);
    const double cot = 1.0 / std::tan(threshold_.omega);
    const double u = Y.x - 0.25 * r_;
    return 0.25 * r_ * (5.0 + threshold_.sin_omega) >= u && u >= cot * std::abs(Y.y);
}

double TriangularCutoff::t1_area() const { return r_ * r_ * std::tan(threshold_.omega); }

double TriangularCutoff::t2_area() const {
    const double len = 0.25 * r_ * (5.0 + threshold_.sin_omega);
    return len * len * std::tan(threshold_.omega);
}

double TriangularCutoff::separation() const {
    const double s = threshold_.sin_omega, c = std::cos(threshold_.omega), t = std::tan(threshold_.omega);
    const double d = gap();
    const std::array<Vec2, 3> verts{Vec2{0.5 * r_, 0.0}, Vec2{1.5 * r_, r_ * t}, Vec2{1.5 * r_, -r_ * t}};
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& v : verts) {
        best = std::min(best, (v.x - 0.25 * r_) * s - v.y * c);
        best = std::min(best, (v.x - 0.25 * r_) * s + v.y * c);
        best = std::min(best, 1.5 * r_ + d - v.x);
    }
    return best;
}

double integrate_t2_scaled(const TriangularCutoff& c, const std::function<double(Vec2)>& f, int panels) {
    const double t = std::tan(c.omega());
    const double d = 0.25 * std::sin(c.omega());
    auto w2 = [&](double u) { return (u - 0.25) * t; };
    auto w1 = [&](double u) { return std::max(0.0, (u - 0.5) * t); };
    auto column = [&](double u) {
        const double a = w1(u), b = w2(u);
        double acc = 0.0;
        if (a > 0.0) acc += gauss_legendre(-a, a, panels, [&](double v) { return f({u, v}); });
        acc += gauss_legendre(a, b, panels, [&](double v) { return f({u, v}); });
        acc += gauss_legendre(-b, -a, panels, [&](double v) { return f({u, v}); });
        return acc;
    };
    return gauss_legendre(0.25, 0.5, panels, column) + gauss_legendre(0.5, 1.5, panels, column) +
           gauss_legendre(1.5, 1.5 + d, panels, column);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

CutoffReport verify_cutoff_properties(const TranslationSequence& seq, const Power& p, const Weight& w,
                                      const AngularLimit& limit, const std::vector<int>& n_list,
                                      const CutoffVerifyConfig& cfg) {
    CutoffReport rep;
    const double pv = p.to_double();
    rep.p = p.str();
    rep.theta_inf = seq.limit_angle();
    rep.atilde_limit = angular_limit_at(limit, rep.theta_inf);
    const ExponentProfile e = exponent_profile(p);
    const double beta = e.beta.get_d();
    const double s_exp = 2.0 * beta / (2.0 - beta);
    rep.lebesgue_exponent = s_exp;
    rep.grad_slope_target = -1.0 / (pv + 2.0);

    std::vector<int> sorted = n_list;
    std::sort(sorted.begin(), sorted.end());
    // threshold: first n after which every listed n passes
    rep.threshold_index = sorted.empty() ? 0 : sorted.back() + 1;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        const PolarPoint& q = seq.polar(*it);
        if (!triangular_threshold(q.r, q.theta, seq.limit_angle(), pv).reached()) break;
        rep.threshold_index = *it;
    }

    for (int n : sorted) {
        if (n < rep.threshold_index) {
            rep.below_threshold.push_back(n);
            continue;
        }
        const TriangularCutoff c = triangular_cutoff(n, seq, p);
        CutoffEntry en;
        en.n = n;
        en.r = c.r();
        en.theta = c.theta();
        en.threshold = c.threshold();
        en.gap = c.gap();
        en.separation = c.separation();
        en.separation_floor = 0.25 * std::pow(c.r(), (pv + 1.0) / (pv + 2.0));

        // C1
        en.c1_min = 1.0;
        for (int i = 0; i < cfg.test_points; ++i)
            for (int j = 0; j < cfg.test_points; ++j) {
                const double step = 2.0 * cfg.test_extent / (cfg.test_points - 1);
                const Vec2 x{-cfg.test_extent + j * step, -cfg.test_extent + i * step};
                en.c1_min = std::min(en.c1_min, c.eval(x).value);
            }

        // C2 and sampled symbol bounds, on a (u, tau) grid covering T2
        const double t = std::tan(c.omega()), d = 0.25 * std::sin(c.omega());
        const double bound1 = std::pow(c.r(), (pv + 1.0) / (pv + 2.0));
        for (int i = 0; i < cfg.support_samples; ++i) {
            const double u = 0.25 + (1.25 + d) * i / (cfg.support_samples - 1);
            for (int j = 0; j < cfg.support_samples; ++j) {
                const double v = (u - 0.25) * t * (-1.0 + 2.0 * j / (cfg.support_samples - 1));
                const Vec2 X = c.from_rotated({c.r() * u, c.r() * v});
                en.c2_sup = std::max(en.c2_sup, std::abs(w.value(X) - rep.atilde_limit));
                const CutoffSample cs = c.eval_scaled({u, v});
                en.sup_grad = std::max(en.sup_grad, norm(cs.gradient) / c.r() * bound1);
                en.sup_lap = std::max(en.sup_lap, std::abs(cs.laplacian) / (c.r() * c.r()) * bound1 * bound1);
            }
        }

        // C3: L^s norms by quadrature in the scaled frame
        const double ig = integrate_t2_scaled(
            c, [&](Vec2 xi) { return std::pow(norm(c.eval_scaled(xi).gradient), s_exp); }, cfg.quadrature_panels);
        const double il = integrate_t2_scaled(
            c, [&](Vec2 xi) { return std::pow(std::abs(c.eval_scaled(xi).laplacian), s_exp); },
            cfg.quadrature_panels);
        en.grad_norm = std::pow(c.r(), -1.0 + 2.0 / s_exp) * std::pow(ig, 1.0 / s_exp);
        en.lap_norm = std::pow(c.r(), -2.0 + 2.0 / s_exp) * std::pow(il, 1.0 / s_exp);
        en.grad_scaled = en.grad_norm * std::pow(c.r(), 1.0 / (pv + 2.0));
        en.lap_scaled = en.lap_norm * c.r();

        // |T2 \ T1|
        en.area_exact = c.t2_area() - c.t1_area();
        en.area_constant = en.area_exact / (c.r() * c.r());
        std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(n));
        auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        const double ulo = 0.25, uhi = 1.5 + d, vmax = (1.25 + d) * t;
        std::size_t hits = 0;
        for (std::size_t k = 0; k < cfg.area_samples; ++k) {
            const Vec2 Y{c.r() * (ulo + (uhi - ulo) * unit()), c.r() * vmax * (2.0 * unit() - 1.0)};
            const Vec2 X = c.from_rotated(Y);
            if (c.in_t2_absolute(X) && !c.in_t1_absolute(X)) ++hits;
        }
        en.area_monte_carlo = static_cast<double>(hits) / static_cast<double>(cfg.area_samples) * (uhi - ulo) *
                              2.0 * vmax * c.r() * c.r();
        rep.entries.push_back(en);
    }

    rep.c1 = rep.c2 = rep.c3 = !rep.entries.empty();
    for (std::size_t k = 0; k < rep.entries.size(); ++k) {
        CutoffEntry& en = rep.entries[k];
        const CutoffEntry& first = rep.entries.front();
        const bool monotone1 = k == 0 || en.c1_min >= rep.entries[k - 1].c1_min;
        en.c1 = monotone1 && en.c1_min >= 1.0 - 1e-12;
        en.c2 = k == 0 || en.c2_sup <= rep.entries[k - 1].c2_sup + 1e-15;
        en.c3 = en.grad_scaled <= cfg.band * first.grad_scaled && en.lap_scaled <= cfg.band * first.lap_scaled;
        rep.c1 = rep.c1 && en.c1;
        rep.c2 = rep.c2 && en.c2;
        rep.c3 = rep.c3 && en.c3;
    }

    if (rep.entries.size() >= 2) {
        std::vector<double> r, g, l;
        for (const auto& en : rep.entries) {
            r.push_back(en.r);
            g.push_back(en.grad_norm);
            l.push_back(en.lap_norm);
        }
        rep.grad_slope = loglog_slope(r, g);
        rep.lap_slope = loglog_slope(r, l);
        rep.slope_ok = std::abs(rep.grad_slope - rep.grad_slope_target) <= cfg.slope_tolerance;
    }
    return rep;
}

}  // namespace inls
