#include <cmath>
#include <cstring>

#include "breather/operators.hpp"
#include "breather/random.hpp"
#include "doctest.h"

using namespace breather;

TEST_CASE("resolvent multiplier on a lattice plane wave") {
    // |xi0|^2 = 2, kappa = 1, eps = 0.1: Re[1/(2 - 1 - 0.1i)] = 1/1.01
    SpaceGrid g{2, 4.0 * M_PI, 32};
    RealField f(g.size());
    for (int j = 0; j < g.points; ++j)
        for (int l = 0; l < g.points; ++l)
            f[static_cast<std::size_t>(j) * g.points + l] =
                std::cos(g.freq(4) * g.coord(j) + g.freq(4) * g.coord(l));

    const OperatorSpec spec = OperatorSpec::fractional_laplacian(1.0);
    const ResolventParams prm{0.1, 1.0};
    const RealField rf = apply_resolvent(spec, g, prm, f);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(rf[i] == doctest::Approx(f[i] / 1.01).epsilon(1e-10));
}

TEST_CASE("resolvent is linear symmetric and even in k") {
    SpaceGrid g{2, 8.0, 32};
    const OperatorSpec spec = OperatorSpec::fractional_laplacian(1.0);
    Rng rng(31);
    RealField f = random_real_field(g, rng);
    RealField h = random_real_field(g, rng);

    const ResolventParams prm = ResolventParams::for_mode(2, 2.0 * M_PI, 1e-3);
    const ResolventParams prm_neg = ResolventParams::for_mode(-2, 2.0 * M_PI, 1e-3);

    // linearity
    RealField combo(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) combo[i] = 0.7 * f[i] - 1.3 * h[i];
    const RealField lhs = apply_resolvent(spec, g, prm, combo);
    const RealField rf = apply_resolvent(spec, g, prm, f);
    const RealField rh = apply_resolvent(spec, g, prm, h);
    double scale = norm_sup(lhs) + 1e-30;
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(lhs[i] - 0.7 * rf[i] + 1.3 * rh[i]) < 1e-13 * scale);

    // symmetry in the L2 pairing
    const double a = inner(g, rf, h);
    const double b = inner(g, f, rh);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));

    // R_k = R_{-k} bit for bit
    const RealField rneg = apply_resolvent(spec, g, prm_neg, f);
    CHECK(std::memcmp(rf.data(), rneg.data(), rf.size() * sizeof(double)) == 0);
}

TEST_CASE("right inverse up to the regularization") {
    SpaceGrid g{2, 8.0, 32};
    const OperatorSpec spec = OperatorSpec::fractional_laplacian(1.0);
    Rng rng(37);
    for (double eps : {1e-2, 1e-3}) {
        for (int trial = 0; trial < 5; ++trial) {
            const double kappa = 1.0;
            // spectral support away from the resonant sphere a(xi) = kappa^2
            RealField f = random_band_limited_field(
                g, rng, g.points / 3,
                [&](double xi2) { return std::abs(xi2 - kappa * kappa) >= 0.5; });
            const double nf = norm_l2(g, f);
            if (nf == 0.0) continue;
            const ResolventParams prm{eps, kappa};
            RealField back = apply_shifted_symbol(spec, g, kappa,
                                                  apply_resolvent(spec, g, prm, f));
            for (std::size_t i = 0; i < f.size(); ++i) back[i] -= f[i];
            CHECK(norm_l2(g, back) <= 2.0 * eps * nf);
        }
    }
}

TEST_CASE("zero mode and resonances are rejected") {
    SpaceGrid g{2, 8.0, 16};
    Rng rng(41);
    RealField f = random_real_field(g, rng);
    CHECK_THROWS_AS(apply_resolvent(OperatorSpec::fractional_laplacian(1.0), g,
                                    ResolventParams{1e-3, 0.0}, f),
                    Error);
    // Klein-Gordon on resonance kappa^2 = m^2
    CHECK_THROWS_AS(apply_resolvent(OperatorSpec::klein_gordon(2.0), g,
                                    ResolventParams{1e-3, 2.0}, f),
                    Error);
}

TEST_CASE("klein gordon below the mass gap") {
    // kappa^2 < m^2: eps = 0 is legal and ||R||_{2->2} <= 1/(m^2 - kappa^2)
    SpaceGrid g{2, 8.0, 32};
    const double m = 3.0, kappa = 1.0;
    const OperatorSpec spec = OperatorSpec::klein_gordon(m);
    const ResolventParams prm{0.0, kappa};
    const double bound = 1.0 / (m * m - kappa * kappa);
    const double est = estimate_dual_norm(
        g, [&](const RealField& v) { return apply_resolvent(spec, g, prm, v); }, 2.0, 16, 8,
        101);
    CHECK(est <= bound * (1.0 + 1e-10));
    CHECK(est > 0.1 * bound);  // the estimate is a genuine lower bound, not junk
}

TEST_CASE("kernel oracle closed forms") {
    const OperatorSpec spec = OperatorSpec::fractional_laplacian(1.0);
    CHECK(kernel_oracle(spec, 3, 1.0, 1.0) ==
          doctest::Approx(std::cos(1.0) / (4.0 * M_PI)).epsilon(1e-12));
    CHECK(kernel_oracle(spec, 3, 2.0, M_PI) ==
          doctest::Approx(1.0 / (4.0 * M_PI * M_PI)).epsilon(1e-12));

    // |G_k(z)| z^{(N-1)/2} stays bounded on [1, 10]
    for (int dim : {2, 3}) {
        double worst = 0.0;
        for (double z = 1.0; z <= 10.0; z += 0.05)
            worst = std::max(worst, std::abs(kernel_oracle(spec, dim, 1.0, z)) *
                                        std::pow(z, 0.5 * (dim - 1)));
        CHECK(worst < 1.0);
    }

    CHECK_THROWS(kernel_oracle(OperatorSpec::fractional_laplacian(2.0), 3, 1.0, 1.0));
}

TEST_CASE("admissible exponent arithmetic") {
    const OperatorSpec fl = OperatorSpec::fractional_laplacian(1.0);

    AdmissibleExponents r2 = admissible_exponents(2, fl, 3.0);
    CHECK(r2.q_min == doctest::Approx(6.0));
    CHECK(r2.q_max == doctest::Approx(12.0));
    CHECK(alpha_exponent(2, fl, 3.0, 8.0) == doctest::Approx(0.5).epsilon(1e-14));

    AdmissibleExponents r3 = admissible_exponents(3, fl, 3.0);
    CHECK(r3.q_min == doctest::Approx(4.0));
    CHECK(r3.q_max == doctest::Approx(4.5));
    CHECK(alpha_exponent(3, fl, 3.0, 4.25) == doctest::Approx(7.0 / 17.0).epsilon(1e-12));

    CHECK_THROWS_AS(admissible_exponents(3, fl, 4.0), ConfigError);  // p = 2(N+1)/(N-1)
    CHECK_THROWS_AS(admissible_exponents(2, fl, 2.0), ConfigError);
    CHECK_THROWS_AS(alpha_exponent(2, fl, 3.0, 5.0), ConfigError);  // q below range
}

TEST_CASE("loglog fit recovers an exact power law") {
    std::vector<double> x, y;
    for (int i = 1; i <= 12; ++i) {
        x.push_back(i * 1.5);
        y.push_back(3.0 * std::pow(i * 1.5, -0.7));
    }
    const LogLogFit fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-10));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("norm estimates are deterministic for a fixed seed") {
    SpaceGrid g{2, 8.0, 16};
    const OperatorSpec spec = OperatorSpec::fractional_laplacian(1.0);
    const ResolventParams prm{1e-2, 1.0};
    const double a = estimate_resolvent_norm(spec, g, prm, 8.0, 16, 4, 7);
    const double b = estimate_resolvent_norm(spec, g, prm, 8.0, 16, 4, 7);
    CHECK(a == b);
    CHECK(a > 0.0);
}
