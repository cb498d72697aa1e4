#pragma once

// Spatial grids and dense fields on the periodic box [-L,L]^N, plus the FFT
// plumbing shared by every spectral operator in the library.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace breather {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent problem description (bad config, bad exponents,
// unsupported operator/symmetry combination). The CLI maps this to exit 2.
class ConfigError : public Error {
  public:
    using Error::Error;
};

using RealField = std::vector<double>;
using ComplexField = std::vector<std::complex<double>>;

// Uniform periodic grid on [-L,L]^N with n points per axis, row-major layout.
// Frequencies live on the lattice (pi/L) * Z^N with the usual FFT index wrap.
struct SpaceGrid {
    int dim = 2;
    double half_width = 16.0;
    int points = 128;

    void validate() const;

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points);
        return s;
    }
    double spacing() const { return 2.0 * half_width / points; }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= spacing();
        return v;
    }
    double coord(int j) const { return -half_width + spacing() * j; }
    int freq_index(int j) const { return j <= points / 2 ? j : j - points; }
    double freq(int j) const;

    bool operator==(const SpaceGrid&) const = default;
};

// In-place complex FFTs; forward is unnormalized, inverse carries the 1/n^N
// factor, so inverse(forward(f)) == f. Plans are cached per shape behind a
// mutex and executed without it (execution on distinct arrays is thread-safe).
void fft_forward(const SpaceGrid& grid, ComplexField& data);
void fft_inverse(const SpaceGrid& grid, ComplexField& data);

// Squared frequency magnitude |xi|^2 for every lattice point, in grid layout.
std::vector<double> frequency_squares(const SpaceGrid& grid);

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);

// Applies a real radial Fourier multiplier m(|xi|^2).
template <class F>
void apply_radial_multiplier(const SpaceGrid& grid, ComplexField& f, F&& multiplier) {
    const std::vector<double> xi2 = frequency_squares(grid);
    fft_forward(grid, f);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= multiplier(xi2[i]);
    fft_inverse(grid, f);
}

double inner(const SpaceGrid& grid, const RealField& a, const RealField& b);
std::complex<double> inner(const SpaceGrid& grid, const ComplexField& a, const ComplexField& b);
double norm_l2(const SpaceGrid& grid, const RealField& f);
double norm_l2(const SpaceGrid& grid, const ComplexField& f);
// (sum |f|^r h^N)^(1/r)
double norm_lr(const SpaceGrid& grid, const RealField& f, double r);
double norm_lr(const SpaceGrid& grid, const ComplexField& f, double r);
double norm_sup(const RealField& f);
double norm_sup(const ComplexField& f);

// Process-wide bound for intra-operator parallelism (modes of the block
// operator). Set once at startup; 1 disables threading.
void set_thread_budget(int threads);
int thread_budget();

}  // namespace breather
