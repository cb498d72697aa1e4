#pragma once

#include <string>

#include "breather/field.hpp"

namespace breather {

// Nonnegative weight Q(x) on a SpaceGrid together with the exponent pair
// (p, q) it is used with. Caches the pointwise roots Q^{1/p}, Q^{1/p'} and
// the weight norm ||Q||_{q/(q-p)} so operator code never recomputes them.
class Potential {
  public:
    Potential() = default;
    Potential(const SpaceGrid& grid, RealField values, double p, double q);

    // Q(x) = amplitude * exp(-|x|^2 / width^2)
    static Potential gaussian(const SpaceGrid& grid, double amplitude, double width, double p,
                              double q);
    static Potential constant(const SpaceGrid& grid, double value, double p, double q);

    const SpaceGrid& grid() const { return grid_; }
    const RealField& values() const { return values_; }
    const RealField& root_p() const { return root_p_; }            // Q^{1/p}
    const RealField& root_p_conj() const { return root_p_conj_; }  // Q^{1/p'}

    double p() const { return p_; }
    double q() const { return q_; }
    double weight_norm() const { return weight_norm_; }  // ||Q||_{q/(q-p)}
    double max_value() const { return max_value_; }
    bool is_zero() const { return max_value_ == 0.0; }

    // Fraction of the total mass of Q inside |x| < L/2; a crude decay
    // summary for the truncation report.
    double interior_mass_fraction() const;

  private:
    SpaceGrid grid_;
    RealField values_;
    RealField root_p_;
    RealField root_p_conj_;
    double p_ = 3.0;
    double q_ = 8.0;
    double weight_norm_ = 0.0;
    double max_value_ = 0.0;
};

}  // namespace breather
