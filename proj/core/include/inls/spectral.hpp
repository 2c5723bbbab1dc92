#pragma once

#include "inls/field.hpp"
#include "inls/scaling.hpp"

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace inls {

/// e^{it Laplacian}: multiplies the spectrum by e^{-it|xi|^2}.
Field free_propagate(const Field& f, double t);

/// Dyadic frequencies (2 pi / L) 2^j covering [2 pi / L, pi n / L].
std::vector<double> dyadic_ladder(const Grid& grid);

/// Littlewood-Paley multiplier at frequency N, sampled on the dual lattice:
/// phi(|xi|/N) - phi(2|xi|/N) with phi the dyadic bump. At the top rung of
/// the ladder the multiplier is 1 - phi(2|xi|/N), so the ladder sums to one
/// away from the zero mode.
std::vector<double> lp_multiplier(const Grid& grid, double frequency);

/// P_N f. Rejects N outside [2 pi / L, pi n / L].
Field lp_project(const Field& f, double frequency);

/// (sum |f|^e h^2)^{1/e}, or max |f| for e = inf.
double lebesgue_norm(const Field& f, double exponent);

/// Frequency-side L^2 norm with weight |xi|^{2 order} (homogeneous) or
/// <xi>^{2 order}.
double sobolev_norm(const Field& f, double order, bool homogeneous);

/// Spectral partial derivatives (Nyquist mode zeroed).
std::array<Field, 2> spectral_gradient(const Field& f);

struct RefinedSobolevRatio {
    double ratio = 0.0;
    double sigma = 0.0;
    double lr_norm = 0.0;
    double sup_piece = 0.0;  ///< sup_N ||P_N f||_{L^r}
    double h1_norm = 0.0;
};

/// sigma(r) = (r - 2)/r on (2, 4]; 2/r above 4 (Gagliardo-Nirenberg step
/// composed with the r = 4 case).
double refined_sobolev_sigma(double r);
RefinedSobolevRatio refined_sobolev_ratio(const Field& f, double r);

}  // namespace inls
