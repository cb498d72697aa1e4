#include <cmath>
#include <complex>

#include "breather/field.hpp"
#include "breather/random.hpp"
#include "doctest.h"

using namespace breather;

namespace {

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("grid geometry") {
    SpaceGrid g{2, 8.0, 16};
    g.validate();
    CHECK(g.size() == 256);
    CHECK(g.spacing() == doctest::Approx(1.0));
    CHECK(g.cell_volume() == doctest::Approx(1.0));
    CHECK(g.coord(0) == doctest::Approx(-8.0));
    CHECK(g.coord(8) == doctest::Approx(0.0));

    // FFT index wrap: second half of the axis carries negative frequencies
    CHECK(g.freq_index(1) == 1);
    CHECK(g.freq_index(8) == 8);
    CHECK(g.freq_index(9) == -7);
    CHECK(g.freq_index(15) == -1);
    CHECK(g.freq(1) == doctest::Approx(M_PI / 8.0));
}

TEST_CASE("fft round trip") {
    SpaceGrid g{2, 8.0, 32};
    Rng rng(7);
    ComplexField f = to_complex(random_real_field(g, rng));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += std::complex<double>(0.0, 0.3) * f[i];
    ComplexField copy = f;
    fft_forward(g, copy);
    fft_inverse(g, copy);
    CHECK(max_abs_diff(f, copy) < 1e-13 * norm_sup(f));
}

TEST_CASE("fft forward matches plane wave coefficient") {
    // e^{i xi . x} with a lattice frequency transforms to a single spike of
    // height n^N at the matching index.
    SpaceGrid g{2, 4.0, 8};
    ComplexField f(g.size());
    const double xi = g.freq(1);
    for (int j = 0; j < g.points; ++j)
        for (int l = 0; l < g.points; ++l) {
            const double phase = xi * g.coord(j);
            f[static_cast<std::size_t>(j) * g.points + l] =
                std::exp(std::complex<double>(0.0, phase));
        }
    fft_forward(g, f);
    // the spike lands at axis index +-1 depending on the transform sign
    // convention; either way it has height n^N and everything else vanishes
    std::size_t spike = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (std::abs(f[i]) > std::abs(f[spike])) spike = i;
    const int a0 = g.freq_index(static_cast<int>(spike) / g.points);
    const int a1 = g.freq_index(static_cast<int>(spike) % g.points);
    CHECK(std::abs(a0) == 1);
    CHECK(a1 == 0);
    CHECK(std::abs(f[spike]) == doctest::Approx(64.0).epsilon(1e-12));
    double rest = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (i != spike) rest = std::max(rest, std::abs(f[i]));
    CHECK(rest < 1e-10);
}

TEST_CASE("frequency squares agree with per axis frequencies") {
    SpaceGrid g{3, 6.0, 8};
    const std::vector<double> xi2 = frequency_squares(g);
    REQUIRE(xi2.size() == g.size());
    // spot check a handful of indices
    auto at = [&](int a, int b, int c) {
        return xi2[(static_cast<std::size_t>(a) * g.points + b) * g.points + c];
    };
    CHECK(at(0, 0, 0) == doctest::Approx(0.0));
    const double base = g.freq(1);
    CHECK(at(1, 0, 0) == doctest::Approx(base * base));
    CHECK(at(0, 7, 0) == doctest::Approx(base * base));  // wraps to -1
    CHECK(at(4, 4, 4) == doctest::Approx(3.0 * 16.0 * base * base));
}

TEST_CASE("norms and inner products") {
    SpaceGrid g{2, 8.0, 16};
    Rng rng(11);
    RealField f = random_real_field(g, rng);
    RealField h = random_real_field(g, rng);

    // homogeneity
    RealField f3 = f;
    for (double& x : f3) x *= -3.0;
    CHECK(norm_lr(g, f3, 2.5) == doctest::Approx(3.0 * norm_lr(g, f, 2.5)).epsilon(1e-12));
    CHECK(norm_l2(g, f3) == doctest::Approx(3.0 * norm_l2(g, f)).epsilon(1e-12));

    // inner product consistency with the L2 norm
    CHECK(inner(g, f, f) == doctest::Approx(norm_l2(g, f) * norm_l2(g, f)).epsilon(1e-12));
    CHECK(inner(g, f, h) == doctest::Approx(inner(g, h, f)).epsilon(1e-12));

    // indicator of one cell: norm_lr = (h^N)^(1/r)
    RealField ind(g.size(), 0.0);
    ind[5] = 1.0;
    CHECK(norm_lr(g, ind, 4.0) ==
          doctest::Approx(std::pow(g.cell_volume(), 0.25)).epsilon(1e-12));
}

TEST_CASE("radial multiplier acts diagonally on plane waves") {
    SpaceGrid g{2, 4.0 * M_PI, 32};
    // cos(xi . x) with |xi|^2 = 2 at lattice point m = (4, 4)
    ComplexField f(g.size());
    for (int j = 0; j < g.points; ++j)
        for (int l = 0; l < g.points; ++l)
            f[static_cast<std::size_t>(j) * g.points + l] =
                std::cos(g.freq(4) * g.coord(j) + g.freq(4) * g.coord(l));
    const ComplexField before = f;
    apply_radial_multiplier(g, f, [](double xi2) { return xi2 + 1.0; });
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(f[i].real() == doctest::Approx(3.0 * before[i].real()).epsilon(1e-10));
}
