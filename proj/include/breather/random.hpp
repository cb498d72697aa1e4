#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "breather/field.hpp"

namespace breather {

using Rng = std::mt19937_64;

// iid standard normals on the grid.
RealField random_real_field(const SpaceGrid& grid, Rng& rng);

// White noise filtered onto lattice modes with every axis index in
// [-axis_band, axis_band]; an optional spectral predicate on |xi|^2 restricts
// the band further. Real by construction.
RealField random_band_limited_field(const SpaceGrid& grid, Rng& rng, int axis_band,
                                    const std::function<bool(double)>& keep = {});

}  // namespace breather
