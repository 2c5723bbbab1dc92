#pragma once

#include "inls/weights.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace inls {

using cplx = std::complex<double>;

/// Periodic n x n grid on the torus [-L/2, L/2)^2. Sample (i, j) sits at
/// x = -L/2 + j h, y = -L/2 + i h and is stored row-major at i n + j.
class Grid {
public:
    Grid(int n, double length);

    int n() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / n_; }
    double cell_area() const { return spacing() * spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

    double coord(int j) const { return -0.5 * length_ + j * spacing(); }
    Vec2 point(int i, int j) const { return {coord(j), coord(i)}; }
    Vec2 point(std::size_t idx) const {
        return point(static_cast<int>(idx / n_), static_cast<int>(idx % n_));
    }

    /// Angular wavenumber of spectral index k in [0, n): (2 pi / L) * wrap(k)
    /// with wrap into [-n/2, n/2).
    double wavenumber(int k) const;
    double fundamental() const;  ///< 2 pi / L
    double nyquist() const;      ///< pi n / L

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.length_ == b.length_;
    }

private:
    int n_;
    double length_;
};

/// Immutable complex field on a Grid. The spectrum (unnormalized forward DFT)
/// is computed once on first use and shared between copies.
class Field {
public:
    Field(Grid grid, std::vector<cplx> values);

    static Field zeros(const Grid& grid);
    static Field sample(const Grid& grid, const std::function<cplx(Vec2)>& f);
    static Field from_spectrum(const Grid& grid, std::vector<cplx> spectrum);

    const Grid& grid() const { return grid_; }
    std::span<const cplx> values() const { return *values_; }
    std::span<const cplx> spectrum() const;

    Field operator*(cplx c) const;
    Field operator+(const Field& other) const;
    Field operator-(const Field& other) const;
    Field conj() const;

private:
    struct SpectrumCache {
        std::once_flag once;
        std::vector<cplx> data;
    };

    Field(Grid grid, std::shared_ptr<const std::vector<cplx>> values, std::shared_ptr<SpectrumCache> cache);

    Grid grid_;
    std::shared_ptr<const std::vector<cplx>> values_;
    std::shared_ptr<SpectrumCache> cache_;
};

enum class FftMode {
    deterministic,  ///< estimate-only plans: identical bits run to run
    fast,           ///< measured plans; faster, not bit-reproducible
};

void set_fft_mode(FftMode mode);
FftMode fft_mode();

/// Unnormalized forward / normalized inverse 2D DFT of an n x n array.
void fft_forward(int n, std::span<const cplx> in, std::span<cplx> out);
void fft_inverse(int n, std::span<const cplx> in, std::span<cplx> out);

}  // namespace inls
