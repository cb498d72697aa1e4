#include "breather/potential.hpp"

#include <algorithm>
#include <cmath>

namespace breather {

Potential::Potential(const SpaceGrid& grid, RealField values, double p, double q)
    : grid_(grid), values_(std::move(values)), p_(p), q_(q) {
    grid_.validate();
    if (values_.size() != grid_.size()) throw Error("potential size does not match grid");
    if (!(p_ > 2.0)) throw ConfigError("nonlinearity power p must exceed 2");
    if (!(q_ > p_)) throw ConfigError("weight norm exponent q/(q-p) requires q > p");
    for (double v : values_)
        if (!(v >= 0.0)) throw Error("potential must be nonnegative");
    max_value_ = *std::max_element(values_.begin(), values_.end());

    const double ip = 1.0 / p_;
    const double ipc = 1.0 - ip;  // 1/p' = 1 - 1/p
    root_p_.resize(values_.size());
    root_p_conj_.resize(values_.size());
    const double r = q_ / (q_ - p_);
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        root_p_[i] = std::pow(values_[i], ip);
        root_p_conj_[i] = std::pow(values_[i], ipc);
        acc += std::pow(values_[i], r);
    }
    weight_norm_ = std::pow(acc * grid_.cell_volume(), 1.0 / r);
}

Potential Potential::gaussian(const SpaceGrid& grid, double amplitude, double width, double p,
                              double q) {
    if (amplitude < 0.0) throw ConfigError("gaussian potential amplitude must be nonnegative");
    if (width <= 0.0) throw ConfigError("gaussian potential width must be positive");
    grid.validate();
    const int n = grid.points;
    const double inv_w2 = 1.0 / (width * width);
    RealField values(grid.size());
    if (grid.dim == 2) {
        for (int j1 = 0; j1 < n; ++j1) {
            const double x1 = grid.coord(j1);
            for (int j0 = 0; j0 < n; ++j0) {
                const double x0 = grid.coord(j0);
                values[static_cast<std::size_t>(j0) * n + j1] =
                    amplitude * std::exp(-(x0 * x0 + x1 * x1) * inv_w2);
            }
        }
    } else {
        for (int j2 = 0; j2 < n; ++j2) {
            const double x2 = grid.coord(j2);
            for (int j1 = 0; j1 < n; ++j1) {
                const double x1 = grid.coord(j1);
                for (int j0 = 0; j0 < n; ++j0) {
                    const double x0 = grid.coord(j0);
                    values[(static_cast<std::size_t>(j0) * n + j1) * n + j2] =
                        amplitude * std::exp(-(x0 * x0 + x1 * x1 + x2 * x2) * inv_w2);
                }
            }
        }
    }
    return Potential(grid, std::move(values), p, q);
}

Potential Potential::constant(const SpaceGrid& grid, double value, double p, double q) {
    grid.validate();
    return Potential(grid, RealField(grid.size(), value), p, q);
}

double Potential::interior_mass_fraction() const {
    const int n = grid_.points;
    const double r2 = 0.25 * grid_.half_width * grid_.half_width;
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double x2 = 0.0;
        std::size_t rest = i;
        for (int d = grid_.dim - 1; d >= 0; --d) {
            const double c = grid_.coord(static_cast<int>(rest % n));
            rest /= n;
            x2 += c * c;
        }
        total += values_[i];
        if (x2 < r2) inside += values_[i];
    }
    return total > 0.0 ? inside / total : 0.0;
}

}  // namespace breather
