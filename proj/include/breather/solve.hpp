#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "breather/dual.hpp"

namespace breather {

enum class Scheme { NehariFixedPoint, MountainPassDescent };

struct SolverConfig {
    Scheme scheme = Scheme::NehariFixedPoint;
    int max_iter = 2000;
    double tol = 1e-8;    // on ||  |V|^{p'-2}V - RV ||_p / ||V||_{p'}^{p'-1}
    double mixing = 1.0;  // fixed-point damping; 1 = undamped
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double initial_step = 1.0;
    std::uint64_t seed = 1;
    int deflation_count = 1;  // number of solutions cmd_solve asks for
    int reseed_limit = 5;
    double noise_scale = 1e-2;       // relative noise on the initial guess
    double deflation_angle = 0.1;    // radians, acceptance threshold
    double deflation_damping = 1.0;  // fraction of the previous-solution component removed

    void validate() const;
};

struct IterationRecord {
    int iter = 0;
    double J = 0.0;
    double residual = 0.0;
    double norm_V_pprime = 0.0;
    double nehari_t = 0.0;
    double wall_ms = 0.0;  // logged separately from the deterministic columns
};

struct Solution {
    TimeField V;
    TimeField U;
    double J_value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool distinct = true;  // false when deflation collapsed onto a previous solution
    double nehari_t = 1.0;
    std::vector<IterationRecord> history{};
    std::vector<std::pair<int, double>> mode_energy{};  // ||v_k||_{p'} per stored mode
};

// Basis fields V_k = w_k(x) T_k(t), T_k = cos(kt) for classes 1/2/4 and
// sin(kt) for 3/5, normalized so that <w_k, R_k^Q w_k> = 2/pi, which makes
// <V_k', R V_k> = 2 delta_{kk'} at T = 2 pi.
struct MPGBasis {
    std::vector<int> ks;
    std::vector<RealField> omegas;
};

MPGBasis build_mpg_basis(const DualProblem& prob, int count);
TimeField mpg_direction(const DualProblem& prob, const MPGBasis& basis, std::size_t index);
// R_m = max{ r, (c_m^2 / p')^{1/(2-p')} } with c_m the sampled norm-equivalence
// constant on span{V_1..V_m} and r the mountain-pass radius for C_R.
std::vector<double> mpg_radii(const DualProblem& prob, const MPGBasis& basis, double C_R,
                              std::uint64_t seed);

struct NehariRescale {
    double t = 1.0;
    TimeField V;
};

// t = (||V||_{p'}^{p'} / <V, RV>)^{1/(2-p')}; throws when <V, RV> <= 0.
NehariRescale nehari_rescale(const DualProblem& prob, const TimeField& V);

// The 1-D profile J(beta D) = a beta^{p'} - b beta^2 along a ray, and its
// closed-form maximizer; used by the mountain-pass path stage.
struct RayProfile {
    double a = 0.0;       // ||D||_{p'}^{p'} / p'
    double b = 0.0;       // <D, RD> / 2
    double p_conj = 1.5;  // exponent p'
    double j_at(double beta) const;
    double maximizer() const;
};
RayProfile ray_profile(const DualProblem& prob, const TimeField& direction);
// Discretized path scan past beta_end with golden-section refinement.
double path_maximum(const RayProfile& profile, double beta_end);

Solution iterate_fixed_point(const DualProblem& prob, const SolverConfig& config,
                             const TimeField* warm_start = nullptr);
Solution mountain_pass_descent(const DualProblem& prob, const SolverConfig& config, double C_R);
Solution deflate_and_continue(const std::vector<Solution>& previous, const DualProblem& prob,
                              const SolverConfig& config);

// Angle between a and b in the <., R.> pairing, in radians.
double solution_angle(const DualProblem& prob, const TimeField& a, const TimeField& b);

}  // namespace breather
