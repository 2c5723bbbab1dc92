#pragma once

#include "inls/field.hpp"

#include <map>
#include <string>

namespace inls {

/// Catalog initial data:
///   gaussian   A exp(-|x - c|^2 / w^2) exp(i v.x / 2)  (amplitude, width, cx, cy, vx, vy)
///              v is the group velocity under e^{it Laplacian}.
///   plane_wave A exp(i k.x), k = (2 pi / L)(mx, my)    (amplitude, mx, my)
///   ring       A exp(-(|x| - R)^2 / w^2)               (amplitude, radius, width)
///   zero
struct InitialDataSpec {
    std::string family = "gaussian";
    std::map<std::string, double> params;
};

Field make_initial_data(const InitialDataSpec& spec, const Grid& grid);

}  // namespace inls
