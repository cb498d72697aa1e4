#include "breather/random.hpp"

#include <cmath>

namespace breather {

RealField random_real_field(const SpaceGrid& grid, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RealField out(grid.size());
    for (double& v : out) v = normal(rng);
    return out;
}

RealField random_band_limited_field(const SpaceGrid& grid, Rng& rng, int axis_band,
                                    const std::function<bool(double)>& keep) {
    ComplexField f = to_complex(random_real_field(grid, rng));
    const std::vector<double> xi2 = frequency_squares(grid);
    fft_forward(grid, f);
    const int n = grid.points;
    std::vector<bool> axis_ok(n);
    for (int j = 0; j < n; ++j) axis_ok[j] = std::abs(grid.freq_index(j)) <= axis_band;
    std::size_t idx = 0;
    if (grid.dim == 2) {
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1, ++idx) {
                const bool pass = axis_ok[j0] && axis_ok[j1] && (!keep || keep(xi2[idx]));
                if (!pass) f[idx] = 0.0;
            }
    } else {
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = 0; j2 < n; ++j2, ++idx) {
                    const bool pass = axis_ok[j0] && axis_ok[j1] && axis_ok[j2] && (!keep || keep(xi2[idx]));
                    if (!pass) f[idx] = 0.0;
                }
    }
    fft_inverse(grid, f);
    return real_part(f);
}

}  // namespace breather
