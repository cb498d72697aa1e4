#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "breather/operators.hpp"
#include "breather/potential.hpp"
#include "breather/random.hpp"
#include "breather/time_field.hpp"

namespace breather {

struct ProblemParams {
    int dim = 2;
    double p = 3.0;
    double q = 8.0;
    int symmetry = 3;
    double period = kDefaultPeriod;
    int cutoff = 7;            // mode cutoff K
    double half_width = 16.0;  // box [-L, L]^N
    int points = 128;          // grid points per axis
    double epsilon = 1e-3;     // resolvent regularization

    double p_conj() const { return p / (p - 1.0); }
    double q_conj() const { return q / (q - 1.0); }
    SpaceGrid make_grid() const { return SpaceGrid{dim, half_width, points}; }
};

struct MountainPassConstants {
    double radius = 0.0;  // r
    double level = 0.0;   // delta
};

// r = (C_R p')^{-1/(2-p')}, delta = r^{p'} / (2 p')
MountainPassConstants mountain_pass_constants(double C_R, double p_conj);

// J from precomputed pieces: lp_power = integral of |V|^{p'}, pairing = <V, RV>
inline double j_combine(double lp_power, double pairing, double p_conj) {
    return lp_power / p_conj - 0.5 * pairing;
}

// Everything the dual formulation needs in one immutable context: the box,
// the operator, the exponents and the weight. All methods are pure.
class DualProblem {
  public:
    DualProblem(const ProblemParams& params, const OperatorSpec& op, Potential weight);

    const ProblemParams& params() const { return params_; }
    const OperatorSpec& op() const { return op_; }
    const Potential& weight() const { return weight_; }
    const SpaceGrid& grid() const { return grid_; }
    const SymmetryClass& sym() const { return sym_; }
    double alpha() const { return alpha_; }
    int sample_count() const { return samples_; }

    TimeField make_field() const { return TimeField(grid_, sym_, params_.cutoff, params_.period); }
    ResolventParams mode_params(int k) const {
        return ResolventParams::for_mode(k, params_.period, params_.epsilon);
    }

    // Birman-Schwinger operator Q^{1/p} R_k [ Q^{1/p} v ]
    RealField bs_apply(int k, const RealField& v) const;
    ComplexField bs_apply(int k, const ComplexField& v) const;

    // [R V]_k = R_k^Q [v_k] for every stored mode; block-diagonal in k
    TimeField big_R_apply(const TimeField& V) const;

    double functional_J(const TimeField& V) const;
    // gradient representative G with J'(V)[W] = integral of G*W over box x period;
    // G = P_K(|V|^{p'-2} V) - R[V], symmetry projected
    TimeField gradient_J(const TimeField& V) const;

    // pointwise duality maps on time samples; exact inverses of one another
    // since (p-1)(p'-1) = 1
    TimeSamples duality_forward(const TimeSamples& v) const;  // |v|^{p'-2} v
    TimeSamples duality_inverse(const TimeSamples& w) const;  // |w|^{p-2} w
    TimeField duality_inverse(const TimeField& W) const;

    // u_k = R_k [ Q^{1/p} v_k ] (unweighted resolvent; Q^{-1/p} is never formed)
    TimeField reconstruct_U(const TimeField& V) const;

    // quadratic form values of the positivity assumption, one per trial mode
    std::map<int, double> check_A3() const;
    std::map<int, double> check_A3(const std::map<int, RealField>& trials) const;
    // default trial: radial Gaussian wave packet in frequency, centered a
    // weight-spectral-width margin above the resonant sphere of mode k
    RealField a3_trial_field(int k) const;
    // rms spectral radius of Q^{1/p}: how far multiplication by the weight
    // smears a sharp frequency shell
    double weight_spectral_width() const;
    // |xi| radius where a(xi) = kappa^2, or 0 when the shifted symbol does
    // not vanish
    double resonant_radius(double kappa) const;
    // modes check_A3 covers by default: the nonnegative mode set, minus
    // modes the resolvent rejects
    std::vector<int> a3_mode_list() const;

    // lower estimate of the p'->p operator norm of R_k^Q by duality-map
    // power iteration
    double estimate_bs_norm(int k, int trials, int refine, std::uint64_t seed) const;
    NormDecayReport norm_decay_report(int k_max, int trials, int refine,
                                      std::uint64_t seed) const;
    // C_R = C_1 (sum over I_s within the band of (k^2+1)^{-alpha p/(2(p-2))})^{(p-2)/p}
    // with C_1 = max_k estimate_k (k^2+1)^{alpha/2} read off the report
    double cauchy_constant(const NormDecayReport& report) const;

  private:
    ProblemParams params_;
    OperatorSpec op_;
    Potential weight_;
    SpaceGrid grid_;
    SymmetryClass sym_;
    double alpha_ = 0.0;
    int samples_ = 0;
};

// Random field in the given symmetry class (independent normal mode
// coefficients, then projected); deterministic for a fixed generator state.
TimeField random_time_field(const SpaceGrid& grid, const SymmetryClass& sym, int cutoff,
                            double period, Rng& rng);

// Unit-norm wave packet with radial Gaussian profile exp(-((|xi|-center)/width)^2)
// in frequency, spatially centered at x = 0.
RealField radial_packet(const SpaceGrid& grid, double center, double width);

}  // namespace breather
