#include "inls/initial_data.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <cmath>

namespace inls {

namespace {

double get(const InitialDataSpec& s, const char* key, double fallback) {
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

void allow_only(const InitialDataSpec& s, std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : s.params)
        if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
            throw ValidationError("initial data '" + s.family + "' has no parameter '" + k + "'");
}

}  // namespace

Field make_initial_data(const InitialDataSpec& spec, const Grid& grid) {
    if (spec.family == "gaussian") {
        allow_only(spec, {"amplitude", "width", "cx", "cy", "vx", "vy"});
        const double a = get(spec, "amplitude", 1.0), w = get(spec, "width", 1.0);
        const double cx = get(spec, "cx", 0.0), cy = get(spec, "cy", 0.0);
        const double vx = get(spec, "vx", 0.0), vy = get(spec, "vy", 0.0);
        if (!(w > 0)) throw ValidationError("gaussian width must be positive");
        return Field::sample(grid, [=](Vec2 x) {
            const double dx = x.x - cx, dy = x.y - cy;
            const double phase = 0.5 * (vx * x.x + vy * x.y);
            return a * std::exp(-(dx * dx + dy * dy) / (w * w)) * cplx(std::cos(phase), std::sin(phase));
        });
    }
    if (spec.family == "plane_wave") {
        allow_only(spec, {"amplitude", "mx", "my"});
        const double a = get(spec, "amplitude", 1.0);
        const double mx = get(spec, "mx", 1.0), my = get(spec, "my", 0.0);
        if (mx != std::round(mx) || my != std::round(my))
            throw ValidationError("plane wave mode indices must be integers");
        const double kx = grid.fundamental() * mx, ky = grid.fundamental() * my;
        return Field::sample(grid, [=](Vec2 x) {
            const double phase = kx * x.x + ky * x.y;
            return cplx(a * std::cos(phase), a * std::sin(phase));
        });
    }
    if (spec.family == "ring") {
        allow_only(spec, {"amplitude", "radius", "width"});
        const double a = get(spec, "amplitude", 1.0), r0 = get(spec, "radius", 4.0), w = get(spec, "width", 1.0);
        if (!(w > 0)) throw ValidationError("ring width must be positive");
        return Field::sample(grid, [=](Vec2 x) {
            const double d = std::hypot(x.x, x.y) - r0;
            return cplx(a * std::exp(-d * d / (w * w)), 0.0);
        });
    }
    if (spec.family == "zero") {
        allow_only(spec, {});
        return Field::zeros(grid);
    }
    throw ValidationError("unknown initial data family '" + spec.family + "'");
}

}  // namespace inls
