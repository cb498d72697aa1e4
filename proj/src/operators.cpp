#include "breather/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace breather {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

OperatorSpec OperatorSpec::fractional_laplacian(double gamma_exponent) {
    if (gamma_exponent <= 0.0) throw ConfigError("fractional exponent gamma must be positive");
    OperatorSpec spec;
    spec.kind = Kind::FractionalLaplacian;
    spec.gamma = gamma_exponent;
    return spec;
}

OperatorSpec OperatorSpec::klein_gordon(double m) {
    if (m <= 0.0) throw ConfigError("Klein-Gordon mass must be positive");
    OperatorSpec spec;
    spec.kind = Kind::KleinGordon;
    spec.mass = m;
    spec.gamma = 1.0;
    return spec;
}

double OperatorSpec::symbol(double xi2) const {
    if (kind == Kind::KleinGordon) return xi2 + mass * mass;
    if (gamma == 1.0) return xi2;
    if (gamma == 2.0) return xi2 * xi2;
    return std::pow(xi2, gamma);
}

ResolventParams ResolventParams::for_mode(int k, double period, double epsilon) {
    ResolventParams params;
    params.epsilon = epsilon;
    params.kappa = 2.0 * std::numbers::pi * k / period;
    return params;
}

namespace {

void validate_resolvent(const OperatorSpec& spec, const SpaceGrid& grid,
                        const ResolventParams& params) {
    if (params.epsilon < 0.0) throw Error("resolvent regularization eps must be nonnegative");
    const double k2 = params.kappa * params.kappa;
    if (spec.kind == OperatorSpec::Kind::FractionalLaplacian && params.kappa == 0.0)
        throw Error("zero mode: |xi|^(2 gamma) has no distributional inverse at xi = 0; "
                    "exclude k = 0 (symmetry class 3 or 5)");
    if (spec.kind == OperatorSpec::Kind::KleinGordon) {
        const double m2 = spec.mass * spec.mass;
        if (std::abs(k2 - m2) <= 1e-12 * std::max(1.0, m2))
            throw Error("resonant mode: kappa^2 = m^2 makes the shifted symbol vanish at xi = 0");
    }
    if (params.epsilon == 0.0) {
        // eps = 0 is only meaningful when the shifted symbol cannot vanish on
        // the lattice; cheapest sufficient condition: positive at xi = 0 and
        // monotone symbol, i.e. a(0) > kappa^2.
        if (spec.symbol(0.0) <= k2)
            throw Error("eps = 0 requires the shifted symbol to be positive (a(0) > kappa^2)");
    }
    grid.validate();
}

}  // namespace

ComplexField apply_resolvent(const OperatorSpec& spec, const SpaceGrid& grid,
                             const ResolventParams& params, const ComplexField& f) {
    validate_resolvent(spec, grid, params);
    const double k2 = params.kappa * params.kappa;
    const double e2 = params.epsilon * params.epsilon;
    ComplexField out = f;
    apply_radial_multiplier(grid, out, [&](double xi2) {
        const double d = spec.symbol(xi2) - k2;
        return d / (d * d + e2);
    });
    return out;
}

RealField apply_resolvent(const OperatorSpec& spec, const SpaceGrid& grid,
                          const ResolventParams& params, const RealField& f) {
    // The multiplier is real and even, so the complex path returns a real
    // field up to roundoff.
    return real_part(apply_resolvent(spec, grid, params, to_complex(f)));
}

ComplexField apply_shifted_symbol(const OperatorSpec& spec, const SpaceGrid& grid, double kappa,
                                  const ComplexField& f) {
    const double k2 = kappa * kappa;
    ComplexField out = f;
    apply_radial_multiplier(grid, out, [&](double xi2) { return spec.symbol(xi2) - k2; });
    return out;
}

RealField apply_shifted_symbol(const OperatorSpec& spec, const SpaceGrid& grid, double kappa,
                               const RealField& f) {
    return real_part(apply_shifted_symbol(spec, grid, kappa, to_complex(f)));
}

double kernel_oracle(const OperatorSpec& spec, int dim, double kappa, double z) {
    if (z <= 0.0) throw Error("kernel_oracle: radius must be positive");
    if (spec.kind != OperatorSpec::Kind::FractionalLaplacian || spec.gamma != 1.0)
        throw Error("kernel_oracle: closed form implemented only for the Laplacian (gamma = 1)");
    if (dim == 3) return std::cos(kappa * z) / (4.0 * std::numbers::pi * z);
    if (dim == 2) return -0.25 * std::cyl_neumann(0.0, kappa * z);
    throw Error("kernel_oracle: closed form implemented only for dim 2 and 3");
}

AdmissibleExponents admissible_exponents(int dim, const OperatorSpec& spec, double p) {
    if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
    const double N = dim;
    double g = 1.0;
    if (spec.kind == OperatorSpec::Kind::FractionalLaplacian) {
        g = spec.gamma;
        if (g <= N / (N + 1.0))
            throw ConfigError("fractional exponent gamma must exceed N/(N+1) = " + fmt(N / (N + 1.0)));
        if (dim == 2 && g != 1.0)
            throw ConfigError("admissible exponents for fractional powers are only covered in dimension 3");
    }
    AdmissibleExponents adm;
    adm.p_min = 2.0;
    const double p_den = (2.0 - g) * N - g;
    adm.p_max = p_den > 0.0 ? 2.0 * g * (N + 1.0) / p_den : kInf;
    if (!(p > adm.p_min) || !(p < adm.p_max))
        throw ConfigError("nonlinearity power p must satisfy 2 < p < " + fmt(adm.p_max) + ", got " + fmt(p));
    adm.q_min = 2.0 * (N + 1.0) / (N - 1.0);
    const double q_den = (N - g) * p - 2.0 * g;
    adm.q_max = q_den > 0.0 ? 2.0 * N * p / q_den : kInf;
    return adm;
}

double alpha_exponent(int dim, const OperatorSpec& spec, double p, double q) {
    const AdmissibleExponents adm = admissible_exponents(dim, spec, p);
    if (!(q > adm.q_min) || !(q < adm.q_max))
        throw ConfigError("exponent q must satisfy " + fmt(adm.q_min) + " < q < " + fmt(adm.q_max) +
                          ", got " + fmt(q));
    const double N = dim;
    const double g = spec.kind == OperatorSpec::Kind::FractionalLaplacian ? spec.gamma : 1.0;
    const double q_conj = q / (q - 1.0);
    const double alpha = 2.0 - N / (g * q_conj) + N / (g * q);
    if (!(alpha > 1.0 - 2.0 / p))
        throw ConfigError("decay rate alpha = " + fmt(alpha) + " violates alpha > 1 - 2/p");
    return alpha;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("fit_loglog: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw Error("fit_loglog: data must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw Error("fit_loglog: degenerate abscissae");
    LogLogFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - fit.slope * lx[i] - fit.intercept;
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / n);
    return fit;
}

double estimate_resolvent_norm(const OperatorSpec& spec, const SpaceGrid& grid,
                               const ResolventParams& params, double q, int trials, int refine,
                               std::uint64_t seed) {
    validate_resolvent(spec, grid, params);
    return estimate_dual_norm(
        grid, [&](const RealField& v) { return apply_resolvent(spec, grid, params, v); }, q, trials,
        refine, seed);
}

}  // namespace breather
