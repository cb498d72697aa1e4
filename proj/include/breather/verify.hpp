#pragma once

#include <complex>
#include <string>
#include <vector>

#include "breather/dual.hpp"
#include "breather/solve.hpp"

namespace breather {

// Space-time test function e^{-i omega_k t} phi(x) with phi a truncated
// Gaussian times a polynomial cutoff, compactly supported inside the box.
struct TestFunction {
    int k = 0;
    std::vector<double> center;
    double radius = 3.0;  // support radius
    double width = 1.0;   // Gaussian width
    RealField bump;       // phi
    RealField shifted;    // (L - kappa^2) phi, applied spectrally
};

TestFunction make_test_function(const SpaceGrid& grid, const OperatorSpec& op, double period,
                                int k, const std::vector<double>& center, double radius,
                                double width);
std::vector<TestFunction> random_test_functions(const DualProblem& prob, int count,
                                                std::uint64_t seed);

// Precomputed pieces shared by all weak-form evaluations of one field U:
// samples of U, of Q|U|^{p-2}U, and their L^2(T x box) norms.
struct WeakFormContext {
    TimeSamples U;
    TimeSamples F;
    double u_l2 = 0.0;
    double f_l2 = 0.0;
};

WeakFormContext make_weak_context(const DualProblem& prob, const TimeSamples& U);

// Signed difference  int int U (dtt + L) Phi - int int Q|U|^{p-2}U Phi.
std::complex<double> weak_form_defect(const WeakFormContext& ctx, int k, const RealField& bump,
                                      const RealField& shifted);
// Cauchy-Schwarz magnitude of the two sides, used to normalize the defect.
double weak_form_scale(const WeakFormContext& ctx, const SpaceGrid& grid, const RealField& bump,
                       const RealField& shifted);
double weak_form_residual(const WeakFormContext& ctx, const SpaceGrid& grid,
                          const TestFunction& tf);

// Full-band test against theta(t) phi(x) with the analytic time profile
// theta(t) = exp(cos(2 pi t / T) - 1), plus an estimate of the neglected
// |k| > K contribution from the measured Fourier decay of theta.
struct SmoothTestResult {
    double residual = 0.0;
    double tail_estimate = 0.0;
};
SmoothTestResult weak_form_smooth_test(const DualProblem& prob, const WeakFormContext& ctx,
                                       int cutoff, const RealField& bump,
                                       const RealField& laplacian_bump);

struct CheckEntry {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckEntry> entries;

    void add(std::string name, double value, double tolerance, bool pass, std::string note = "");
    bool all_passed() const;
    const CheckEntry* find(const std::string& name) const;
};

std::string report_text(const VerificationReport& report);
std::string report_csv(const VerificationReport& report);

// Relative defect of the algebraic identity
// J'(V)[V] - 2 J(V) = (1 - 2/p') int int |V|^{p'}.
double ps_identity_defect(const DualProblem& prob, const TimeField& V);

// Duality, Palais-Smale, Nehari and unboundedness audits of a solution pair.
VerificationReport identity_audit(const DualProblem& prob, const TimeField& V,
                                  const TimeField& U, double solver_tol);

struct DecayFit {
    double slope = 0.0;
    double rms_residual = 0.0;
    int bins = 0;
};
// Log-log fit of the radial average of ||U(., x)||_{L^p(T)} over the annulus
// L/4 <= |x| <= L/2. Throws "no decay signal" when the annulus is empty.
DecayFit decay_profile(const DualProblem& prob, const TimeSamples& U);

struct AssumptionReport {
    VerificationReport report;
    NormDecayReport decay;
    double C_R = 0.0;
    MountainPassConstants mp;
};
AssumptionReport assumption_report(const DualProblem& prob, std::uint64_t seed);

// Everything checked on one stored solution pair: identities, the critical
// point residual, randomized weak forms, the smooth-profile test, spectrum
// and decay diagnostics.
VerificationReport verify_solution(const DualProblem& prob, const TimeField& V,
                                   const TimeField& U, double solver_tol, int weak_count,
                                   std::uint64_t seed);

struct RefinementLevel {
    double epsilon = 0.0;
    double residual = 0.0;
    double j_value = 0.0;
    double max_weak_residual = 0.0;
};
// Re-solves at eps/2, eps/4, ... warm-started from `base`; weak-form
// residuals must not grow as eps shrinks.
std::vector<RefinementLevel> epsilon_refinement(const DualProblem& prob,
                                                const SolverConfig& config, const Solution& base,
                                                int levels, int weak_count, std::uint64_t seed);

}  // namespace breather
