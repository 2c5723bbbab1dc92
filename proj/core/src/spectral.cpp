#include "inls/spectral.hpp"

#include "inls/errors.hpp"
#include "inls/smooth_step.hpp"

#include <algorithm>
#include <cmath>

namespace inls {

Field free_propagate(const Field& f, double t) {
    const Grid& g = f.grid();
    const int n = g.n();
    auto spec = f.spectrum();
    std::vector<cplx> out(spec.begin(), spec.end());
    if (t != 0.0) {
        std::vector<double> k2(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) k2[k] = g.wavenumber(k) * g.wavenumber(k);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double phase = -t * (k2[i] + k2[j]);
                out[static_cast<std::size_t>(i) * n + j] *= cplx(std::cos(phase), std::sin(phase));
            }
        }
    } else {
        return f;
    }
    return Field::from_spectrum(g, std::move(out));
}

std::vector<double> dyadic_ladder(const Grid& grid) {
    std::vector<double> out;
    const double top = grid.nyquist() * (1.0 + 1e-12);
    for (double nf = grid.fundamental(); nf <= top; nf *= 2.0) out.push_back(nf);
    return out;
}

std::vector<double> lp_multiplier(const Grid& grid, double frequency) {
    const double lo = grid.fundamental(), hi = grid.nyquist();
    if (!(frequency >= lo * (1 - 1e-12) && frequency <= hi * (1 + 1e-12)))
        throw ValidationError("Littlewood-Paley frequency outside the resolvable range");
    const auto ladder = dyadic_ladder(grid);
    const bool top = std::abs(frequency - ladder.back()) <= 1e-12 * ladder.back();
    const int n = grid.n();
    std::vector<double> m(grid.size());
    for (int i = 0; i < n; ++i) {
        const double ky = grid.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double kx = grid.wavenumber(j);
            const double r = std::hypot(kx, ky) / frequency;
            const double outer = top ? 1.0 : dyadic_bump(r);
            m[static_cast<std::size_t>(i) * n + j] = outer - dyadic_bump(2.0 * r);
        }
    }
    return m;
}

Field lp_project(const Field& f, double frequency) {
    const auto m = lp_multiplier(f.grid(), frequency);
    auto spec = f.spectrum();
    std::vector<cplx> out(spec.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec[k] * m[k];
    return Field::from_spectrum(f.grid(), std::move(out));
}

double lebesgue_norm(const Field& f, double exponent) {
    if (!(exponent >= 1.0)) throw ValidationError("Lebesgue exponent must be >= 1");
    auto v = f.values();
    if (std::isinf(exponent)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double acc = 0.0;
    if (exponent == 2.0) {
        for (const auto& z : v) acc += std::norm(z);
        return std::sqrt(acc * f.grid().cell_area());
    }
    for (const auto& z : v) acc += std::pow(std::abs(z), exponent);
    return std::pow(acc * f.grid().cell_area(), 1.0 / exponent);
}

double sobolev_norm(const Field& f, double order, bool homogeneous) {
    if (!(order >= 0.0 && order <= 1.0)) throw ValidationError("Sobolev order must lie in [0, 1]");
    const Grid& g = f.grid();
    const int n = g.n();
    auto spec = f.spectrum();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ky = g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double kx = g.wavenumber(j);
            const double k2 = kx * kx + ky * ky;
            double w;
            if (order == 0.0) w = 1.0;
            else if (homogeneous) w = std::pow(k2, order);
            else w = std::pow(1.0 + k2, order);
            acc += w * std::norm(spec[static_cast<std::size_t>(i) * n + j]);
        }
    }
    // Parseval: sum |f|^2 h^2 = (h^2 / n^2) sum |f_hat|^2
    const double nn = static_cast<double>(n) * n;
    return std::sqrt(acc * g.cell_area() / nn);
}

std::array<Field, 2> spectral_gradient(const Field& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    auto spec = f.spectrum();
    std::vector<cplx> dx(spec.size()), dy(spec.size());
    const cplx I(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double ky = (i == n / 2) ? 0.0 : g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const double kx = (j == n / 2) ? 0.0 : g.wavenumber(j);
            const std::size_t k = static_cast<std::size_t>(i) * n + j;
            dx[k] = I * kx * spec[k];
            dy[k] = I * ky * spec[k];
        }
    }
    return {Field::from_spectrum(g, std::move(dx)), Field::from_spectrum(g, std::move(dy))};
}

double refined_sobolev_sigma(double r) {
    if (!(r > 2.0) || std::isinf(r)) throw ValidationError("refined Sobolev exponent must lie in (2, inf)");
    return r <= 4.0 ? (r - 2.0) / r : 2.0 / r;
}

RefinedSobolevRatio refined_sobolev_ratio(const Field& f, double r) {
    RefinedSobolevRatio out;
    out.sigma = refined_sobolev_sigma(r);
    out.lr_norm = lebesgue_norm(f, r);
    out.h1_norm = sobolev_norm(f, 1.0, false);
    if (out.h1_norm == 0.0) throw ValidationError("refined Sobolev ratio undefined for the zero field");
    for (double nf : dyadic_ladder(f.grid()))
        out.sup_piece = std::max(out.sup_piece, lebesgue_norm(lp_project(f, nf), r));
    const double den = std::pow(out.sup_piece, out.sigma) * std::pow(out.h1_norm, 1.0 - out.sigma);
    out.ratio = den > 0.0 ? out.lr_norm / den : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace inls
