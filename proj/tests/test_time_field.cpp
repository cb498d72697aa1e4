#include <cmath>
#include <complex>
#include <vector>

#include "breather/dual.hpp"
#include "breather/random.hpp"
#include "breather/symmetry.hpp"
#include "breather/time_field.hpp"
#include "doctest.h"

using namespace breather;

namespace {

const SpaceGrid kGrid{2, 6.0, 16};

RealField gaussian_bump(const SpaceGrid& g) {
    RealField f(g.size());
    for (int j = 0; j < g.points; ++j)
        for (int l = 0; l < g.points; ++l) {
            const double x = g.coord(j), y = g.coord(l);
            f[static_cast<std::size_t>(j) * g.points + l] = std::exp(-(x * x + y * y) / 2.0);
        }
    return f;
}

double max_mode_diff(const TimeField& a, const TimeField& b) {
    double m = 0.0;
    for (int k : a.mode_indices())
        for (std::size_t i = 0; i < a.mode(k).size(); ++i)
            m = std::max(m, std::abs(a.mode(k)[i] - b.mode(k)[i]));
    return m;
}

}  // namespace

TEST_CASE("mode sets per symmetry class") {
    CHECK(mode_set(SymmetryClass(3), 3) == std::vector<int>{-3, -2, -1, 1, 2, 3});
    CHECK(mode_set(SymmetryClass(5), 4) == std::vector<int>{-3, -1, 1, 3});
    CHECK(mode_set(SymmetryClass(4), 0) == std::vector<int>{0});
    CHECK(nonneg_mode_set(SymmetryClass(5), 4) == std::vector<int>{1, 3});
    CHECK_THROWS_AS(SymmetryClass(6), ConfigError);
}

TEST_CASE("analyze extracts a single sine mode") {
    const RealField g = gaussian_bump(kGrid);
    const int M = 32;
    TimeSamples samples{kGrid, kDefaultPeriod, {}};
    for (int m = 0; m < M; ++m) {
        const double t = kDefaultPeriod * m / M;
        RealField frame = g;
        for (double& x : frame) x *= std::sin(t);
        samples.frames.push_back(std::move(frame));
    }
    TimeField V = analyze(samples, SymmetryClass(3), 3);
    // sin t = -(i/2) e^{it} + (i/2) e^{-it}
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(V.mode(1)[i].real() == doctest::Approx(0.0).epsilon(0).scale(1));
        CHECK(V.mode(1)[i].imag() == doctest::Approx(-0.5 * g[i]).epsilon(1e-12));
        CHECK(std::abs(V.mode(2)[i]) < 1e-13);
        CHECK(std::abs(V.mode(3)[i]) < 1e-13);
    }
}

TEST_CASE("synthesize two conjugate modes") {
    const RealField g = gaussian_bump(kGrid);
    TimeField V(kGrid, SymmetryClass(3), 1);
    for (std::size_t i = 0; i < g.size(); ++i) V.mode(1)[i] = {0.0, g[i]};
    // e^{it}(ig) + e^{-it}(-ig) = -2 sin(t) g
    const auto frames = synthesize_at(V, {M_PI / 2.0, 0.0, M_PI / 6.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(frames[0][i] == doctest::Approx(-2.0 * g[i]).epsilon(1e-12));
        CHECK(frames[1][i] == doctest::Approx(0.0).scale(std::abs(g[i]) + 1.0));
        CHECK(frames[2][i] == doctest::Approx(-g[i]).epsilon(1e-12));
    }
}

TEST_CASE("analyze synthesize round trip is exact in the band") {
    Rng rng(3);
    for (int s : {1, 2, 3, 4, 5}) {
        TimeField V = random_time_field(kGrid, SymmetryClass(s), 4, kDefaultPeriod, rng);
        TimeField back = analyze(synthesize(V, 16), SymmetryClass(s), 4);
        CHECK(max_mode_diff(V, back) < 1e-12 * (1.0 + l2_norm(V)));
    }
}

TEST_CASE("analyze rejects aliased sampling") {
    TimeSamples samples{kGrid, kDefaultPeriod, std::vector<RealField>(6, RealField(kGrid.size(), 0.0))};
    CHECK_THROWS(analyze(samples, SymmetryClass(3), 3));  // needs >= 2K+2 = 8
}

TEST_CASE("symmetry projection keeps the right part of each mode") {
    const RealField g = gaussian_bump(kGrid);
    TimeField V(kGrid, SymmetryClass(1), 2);
    for (std::size_t i = 0; i < g.size(); ++i) V.mode(1)[i] = {g[i], g[i]};  // (1+i) g

    TimeField odd = project_symmetry(V, SymmetryClass(3));
    TimeField even = project_symmetry(V, SymmetryClass(2));
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(odd.mode(1)[i].real() == doctest::Approx(0.0).scale(1.0));
        CHECK(odd.mode(1)[i].imag() == doctest::Approx(g[i]).epsilon(1e-12));
        CHECK(even.mode(1)[i].real() == doctest::Approx(g[i]).epsilon(1e-12));
        CHECK(even.mode(1)[i].imag() == doctest::Approx(0.0).scale(1.0));
    }

    // idempotent and norm-nonincreasing
    Rng rng(5);
    TimeField W = random_time_field(kGrid, SymmetryClass(1), 3, kDefaultPeriod, rng);
    TimeField P = project_symmetry(W, SymmetryClass(3));
    CHECK(l2_norm(P) <= l2_norm(W) * (1.0 + 1e-14));
    TimeField PP = project_symmetry(P, SymmetryClass(3));
    CHECK(max_mode_diff(P, PP) < 1e-14 * (1.0 + l2_norm(P)));
}

TEST_CASE("pi periodicity of even mode class") {
    Rng rng(9);
    TimeField V = random_time_field(kGrid, SymmetryClass(4), 4, kDefaultPeriod, rng);
    const auto frames = synthesize_at(V, {0.3, 0.3 + M_PI});
    double scale = norm_sup(frames[0]) + 1e-30;
    for (std::size_t i = 0; i < frames[0].size(); ++i)
        CHECK(std::abs(frames[0][i] - frames[1][i]) < 1e-12 * scale);
}

TEST_CASE("parseval at p=2") {
    Rng rng(13);
    TimeField V = random_time_field(kGrid, SymmetryClass(3), 5, kDefaultPeriod, rng);
    const double quad = lp_power_integral(synthesize(V, 24), 2.0);
    const double modal = pairing_modal(V, V);
    CHECK(quad == doctest::Approx(modal).epsilon(1e-12));
}

TEST_CASE("mixed norm of a space indicator") {
    // constant 1 in time on a box B: ||W|| = (2 pi)^{1/p} |B|^{1/q}
    const double p = 3.0, q = 8.0;
    RealField ind(kGrid.size(), 0.0);
    std::size_t cells = 0;
    for (int j = 4; j < 8; ++j)
        for (int l = 4; l < 10; ++l) {
            ind[static_cast<std::size_t>(j) * kGrid.points + l] = 1.0;
            ++cells;
        }
    TimeSamples W{kGrid, kDefaultPeriod, std::vector<RealField>(12, ind)};
    const double expect = std::pow(2.0 * M_PI, 1.0 / p) *
                          std::pow(cells * kGrid.cell_volume(), 1.0 / q);
    CHECK(mixed_norm(W, q, p) == doctest::Approx(expect).epsilon(1e-12));

    // homogeneity
    TimeSamples W2 = scaled(W, -2.5);
    CHECK(mixed_norm(W2, q, p) == doctest::Approx(2.5 * mixed_norm(W, q, p)).epsilon(1e-12));

    // p = q collapses to the plain space-time norm
    Rng rng(17);
    TimeField V = random_time_field(kGrid, SymmetryClass(3), 3, kDefaultPeriod, rng);
    TimeSamples S = synthesize(V, 16);
    CHECK(mixed_norm(S, 4.0, 4.0) == doctest::Approx(lp_norm(S, 4.0)).epsilon(1e-10));
}

TEST_CASE("field arithmetic and sample counts") {
    Rng rng(21);
    TimeField a = random_time_field(kGrid, SymmetryClass(3), 3, kDefaultPeriod, rng);
    TimeField b = random_time_field(kGrid, SymmetryClass(3), 3, kDefaultPeriod, rng);
    TimeField c = add_scaled(a, b, 2.0);
    for (int k : a.mode_indices())
        for (std::size_t i = 0; i < a.mode(k).size(); ++i)
            CHECK(std::abs(c.mode(k)[i] - a.mode(k)[i] - 2.0 * b.mode(k)[i]) < 1e-14);

    CHECK(default_sample_count(7) == 64);
    CHECK(default_sample_count(15) == 128);

    CHECK(a.omega(3) == doctest::Approx(3.0));
    CHECK(!a.has_mode(0));  // class 3 drops the zero mode
    CHECK(TimeField(kGrid, SymmetryClass(5), 4).mode_indices() == std::vector<int>{1, 3});
}
