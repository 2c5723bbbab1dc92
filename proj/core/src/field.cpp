#include "inls/field.hpp"

#include "inls/errors.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <numbers>

namespace inls {

Grid::Grid(int n, double length) : n_(n), length_(length) {
    if (n < 8 || (n & (n - 1)) != 0) throw ValidationError("grid size must be a power of two >= 8");
    if (!(length > 0) || !std::isfinite(length)) throw ValidationError("grid length must be positive");
}

double Grid::wavenumber(int k) const {
    const int wrapped = k < n_ / 2 ? k : k - n_;
    return fundamental() * wrapped;
}

double Grid::fundamental() const { return 2.0 * std::numbers::pi / length_; }
double Grid::nyquist() const { return std::numbers::pi * n_ / length_; }

namespace {

std::atomic<FftMode> g_mode{FftMode::deterministic};

struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex g_plan_mutex;

Plans plans_for(int n) {
    static std::map<std::pair<int, FftMode>, Plans> cache;
    const FftMode mode = g_mode.load();
    std::lock_guard lock(g_plan_mutex);
    auto key = std::make_pair(n, mode);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const std::size_t count = static_cast<std::size_t>(n) * n;
    fftw_complex* a = fftw_alloc_complex(count);
    fftw_complex* b = fftw_alloc_complex(count);
    const unsigned flags = (mode == FftMode::fast ? FFTW_MEASURE : FFTW_ESTIMATE) | FFTW_UNALIGNED;
    Plans p;
    p.forward = fftw_plan_dft_2d(n, n, a, b, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
    cache.emplace(key, p);
    return p;
}

void check_sizes(int n, std::size_t in, std::size_t out) {
    const std::size_t count = static_cast<std::size_t>(n) * n;
    if (in != count || out != count) throw ValidationError("FFT buffer size mismatch");
}

}  // namespace

void set_fft_mode(FftMode mode) { g_mode.store(mode); }
FftMode fft_mode() { return g_mode.load(); }

void fft_forward(int n, std::span<const cplx> in, std::span<cplx> out) {
    check_sizes(n, in.size(), out.size());
    const Plans p = plans_for(n);
    // FFTW's new-array execute takes non-const input but does not modify it
    // for out-of-place complex transforms.
    fftw_execute_dft(p.forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

void fft_inverse(int n, std::span<const cplx> in, std::span<cplx> out) {
    check_sizes(n, in.size(), out.size());
    const Plans p = plans_for(n);
    fftw_execute_dft(p.backward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& z : out) z *= scale;
}

Field::Field(Grid grid, std::vector<cplx> values)
    : grid_(grid), cache_(std::make_shared<SpectrumCache>()) {
    if (values.size() != grid_.size()) throw ValidationError("field size does not match grid");
    values_ = std::make_shared<const std::vector<cplx>>(std::move(values));
}

Field::Field(Grid grid, std::shared_ptr<const std::vector<cplx>> values, std::shared_ptr<SpectrumCache> cache)
    : grid_(grid), values_(std::move(values)), cache_(std::move(cache)) {}

Field Field::zeros(const Grid& grid) { return Field(grid, std::vector<cplx>(grid.size())); }

Field Field::sample(const Grid& grid, const std::function<cplx(Vec2)>& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.point(k));
    return Field(grid, std::move(v));
}

Field Field::from_spectrum(const Grid& grid, std::vector<cplx> spectrum) {
    if (spectrum.size() != grid.size()) throw ValidationError("spectrum size does not match grid");
    std::vector<cplx> values(grid.size());
    fft_inverse(grid.n(), spectrum, values);
    auto cache = std::make_shared<SpectrumCache>();
    std::call_once(cache->once, [&] { cache->data = std::move(spectrum); });
    return Field(grid, std::make_shared<const std::vector<cplx>>(std::move(values)), std::move(cache));
}

std::span<const cplx> Field::spectrum() const {
    std::call_once(cache_->once, [this] {
        cache_->data.resize(grid_.size());
        fft_forward(grid_.n(), *values_, cache_->data);
    });
    return cache_->data;
}

Field Field::operator*(cplx c) const {
    std::vector<cplx> v(*values_);
    for (auto& z : v) z *= c;
    return Field(grid_, std::move(v));
}

Field Field::operator+(const Field& other) const {
    if (!(grid_ == other.grid_)) throw ValidationError("grid mismatch");
    std::vector<cplx> v(*values_);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += (*other.values_)[k];
    return Field(grid_, std::move(v));
}

Field Field::operator-(const Field& other) const {
    if (!(grid_ == other.grid_)) throw ValidationError("grid mismatch");
    std::vector<cplx> v(*values_);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= (*other.values_)[k];
    return Field(grid_, std::move(v));
}

Field Field::conj() const {
    std::vector<cplx> v(*values_);
    for (auto& z : v) z = std::conj(z);
    return Field(grid_, std::move(v));
}

}  // namespace inls
