#pragma once

// Spatial operators L with radial symbol a(xi), their regularized resolvents
// (L - kappa^2 - i eps)^(-1) realized as Fourier multipliers, closed-form
// kernel oracles, admissible exponent arithmetic, and empirical operator-norm
// estimation.

#include <cstdint>
#include <functional>
#include <vector>

#include "breather/field.hpp"
#include "breather/random.hpp"

namespace breather {

struct OperatorSpec {
    enum class Kind { FractionalLaplacian, KleinGordon };

    Kind kind = Kind::FractionalLaplacian;
    double gamma = 1.0;  // (-Laplace)^gamma, symbol |xi|^(2 gamma)
    double mass = 0.0;   // -Laplace + m^2, symbol |xi|^2 + m^2

    static OperatorSpec fractional_laplacian(double gamma_exponent);
    static OperatorSpec klein_gordon(double m);

    double symbol(double xi2) const;
    bool zero_mode_invertible() const { return kind == Kind::KleinGordon; }
};

struct ResolventParams {
    double epsilon = 1e-3;
    double kappa = 0.0;  // frequency shift; mode k of a T-periodic field has kappa = 2 pi k / T

    static ResolventParams for_mode(int k, double period, double epsilon);
};

// Real part of the limiting-absorption resolvent at fixed eps:
//   multiplier  (a(xi) - kappa^2) / ((a(xi) - kappa^2)^2 + eps^2),
// which is real and even, hence symmetric and reality-preserving. eps = 0 is
// accepted only when the shifted symbol is bounded away from zero on the
// lattice (e.g. Klein-Gordon with kappa^2 < m^2).
ComplexField apply_resolvent(const OperatorSpec& spec, const SpaceGrid& grid,
                             const ResolventParams& params, const ComplexField& f);
RealField apply_resolvent(const OperatorSpec& spec, const SpaceGrid& grid,
                          const ResolventParams& params, const RealField& f);

// (L - kappa^2) applied spectrally; used for right-inverse checks and for
// test functions in the weak form.
ComplexField apply_shifted_symbol(const OperatorSpec& spec, const SpaceGrid& grid, double kappa,
                                  const ComplexField& f);
RealField apply_shifted_symbol(const OperatorSpec& spec, const SpaceGrid& grid, double kappa,
                               const RealField& f);

// Closed-form radial kernels of the eps -> 0 resolvent, where known:
//   dim 3, gamma 1:  cos(kappa z) / (4 pi z)
//   dim 2, gamma 1:  -Y_0(kappa z) / 4
double kernel_oracle(const OperatorSpec& spec, int dim, double kappa, double z);

struct AdmissibleExponents {
    double p_min = 2.0;
    double p_max = 0.0;  // exclusive; infinity() when unconstrained
    double q_min = 0.0;  // exclusive
    double q_max = 0.0;  // exclusive; infinity() when unconstrained
};

// Open ranges for the nonlinearity power p and the Strichartz-type exponent q.
// Throws ConfigError when p is out of range or the (dim, operator) pair is not
// covered.
AdmissibleExponents admissible_exponents(int dim, const OperatorSpec& spec, double p);

// Resolvent decay rate alpha for the pair (p, q); validates q against the
// admissible range and alpha > 1 - 2/p.
double alpha_exponent(int dim, const OperatorSpec& spec, double p, double q);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Lower estimate of the L^(r') -> L^r norm of a symmetric operator by a
// duality-map power iteration started from the best of `trials` random fields.
// Deterministic for a fixed seed.
template <class Op>
double estimate_dual_norm(const SpaceGrid& grid, Op&& apply, double r, int trials, int refine,
                          std::uint64_t seed) {
    if (r < 2.0) throw Error("estimate_dual_norm: exponent must be >= 2");
    const double r_conj = r / (r - 1.0);
    Rng rng(seed);
    RealField best;
    double best_value = -1.0;
    for (int t = 0; t < trials; ++t) {
        RealField v = random_real_field(grid, rng);
        const double nv = norm_lr(grid, v, r_conj);
        if (nv == 0.0) continue;
        for (double& x : v) x /= nv;
        const double value = norm_lr(grid, apply(v), r);
        if (value > best_value) {
            best_value = value;
            best = v;
        }
    }
    if (best_value <= 0.0) return 0.0;
    RealField v = best;
    for (int it = 0; it < refine; ++it) {
        RealField u = apply(v);
        const double nu = norm_lr(grid, u, r);
        if (nu == 0.0) break;
        best_value = std::max(best_value, nu);
        // duality map L^r -> L^(r'), then back through the operator
        for (double& x : u) x = std::pow(std::abs(x), r - 2.0) * x;
        RealField w = apply(u);
        // inverse duality map onto the unit sphere of L^(r')
        for (double& x : w) x = std::pow(std::abs(x), r - 2.0) * x;
        const double nw = norm_lr(grid, w, r_conj);
        if (nw == 0.0) break;
        for (double& x : w) x /= nw;
        v = w;
    }
    return best_value;
}

// ||R_kappa||_(q' -> q) estimate for the unweighted resolvent.
double estimate_resolvent_norm(const OperatorSpec& spec, const SpaceGrid& grid,
                               const ResolventParams& params, double q, int trials, int refine,
                               std::uint64_t seed);

struct NormDecayEntry {
    int k = 0;
    double estimate = 0.0;
};

struct NormDecayReport {
    std::vector<NormDecayEntry> entries;
    LogLogFit fit;            // log(estimate) against log(k^2 + 1)
    double alpha_target = 0;  // decay should be at least (k^2+1)^(-alpha/2)
};

}  // namespace breather
