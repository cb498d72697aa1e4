#pragma once

// Time-periodic fields V(t,x) = sum_k v_k(x) e^(i 2 pi k t / T) with a finite
// mode cutoff. Only the nonnegative modes are stored; v_{-k} = conj(v_k) is
// implicit, which keeps synthesized signals real by construction.

#include <utility>
#include <vector>

#include "breather/field.hpp"
#include "breather/symmetry.hpp"

namespace breather {

constexpr double kDefaultPeriod = 6.283185307179586476925286766559;  // 2 pi

class TimeField {
  public:
    TimeField(SpaceGrid grid, SymmetryClass sym, int cutoff, double period = kDefaultPeriod);

    const SpaceGrid& grid() const { return grid_; }
    SymmetryClass symmetry() const { return sym_; }
    int cutoff() const { return cutoff_; }
    double period() const { return period_; }
    // Angular frequency of mode k: 2 pi k / T.
    double omega(int k) const;

    const std::vector<int>& mode_indices() const { return ks_; }
    bool has_mode(int k) const;
    ComplexField& mode(int k);
    const ComplexField& mode(int k) const;

  private:
    SpaceGrid grid_;
    SymmetryClass sym_;
    int cutoff_;
    double period_;
    std::vector<int> ks_;
    std::vector<ComplexField> modes_;
};

// Uniformly sampled real signal: frames[m] is the field at t_m = m T / M.
struct TimeSamples {
    SpaceGrid grid;
    double period = kDefaultPeriod;
    std::vector<RealField> frames;

    int count() const { return static_cast<int>(frames.size()); }
    double time_weight() const { return period / count(); }
    // Quadrature weight of one space-time sample.
    double quad_weight() const { return time_weight() * grid.cell_volume(); }
};

// Sample count used for nonlinear pointwise work at cutoff K.
int default_sample_count(int cutoff);

TimeSamples synthesize(const TimeField& field, int sample_count);
std::vector<RealField> synthesize_at(const TimeField& field, const std::vector<double>& times);

// Discrete time Fourier analysis followed by symmetry projection.
// Requires sample_count >= 2*cutoff + 2 so the band is alias-free.
TimeField analyze(const TimeSamples& samples, SymmetryClass sym, int cutoff);

// L2-orthogonal projection onto the given class (mode filter plus per-mode
// real/imaginary part as dictated by the class). Idempotent, norm-nonincreasing.
TimeField project_symmetry(const TimeField& field, SymmetryClass sym);

// || (int_T |W|^p dt)^(1/p) ||_{L^q(box)} by quadrature.
double mixed_norm(const TimeSamples& samples, double q, double p);
double mixed_norm(const TimeField& field, double q, double p);

// int int |W|^r dt dx and the corresponding norm.
double lp_power_integral(const TimeSamples& samples, double r);
double lp_norm(const TimeSamples& samples, double r);

// int int A B dt dx, modal form (exact for band-limited factors).
double pairing_modal(const TimeField& a, const TimeField& b);
// Same pairing by sample quadrature.
double pairing_quad(const TimeSamples& a, const TimeSamples& b);

double l2_norm(const TimeField& field);
// Spatial L^r norm of each stored mode: (k, ||v_k||_r).
std::vector<std::pair<int, double>> mode_energies(const TimeField& field, double r);

TimeField scaled(const TimeField& field, double factor);
// a + factor * b; fields must share grid, class, cutoff, period.
TimeField add_scaled(const TimeField& a, const TimeField& b, double factor);

TimeSamples scaled(const TimeSamples& samples, double factor);
TimeSamples add_scaled(const TimeSamples& a, const TimeSamples& b, double factor);

}  // namespace breather
