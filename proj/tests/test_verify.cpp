#include <algorithm>
#include <cmath>
#include <complex>

#include "breather/solve.hpp"
#include "breather/verify.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace breather;

namespace {

// one converged small solution shared by the pipeline tests below
const Solution& small_solution() {
    static const Solution sol = [] {
        const DualProblem prob = small_problem();
        SolverConfig cfg;
        cfg.tol = 1e-7;
        cfg.max_iter = 800;
        Solution s = iterate_fixed_point(prob, cfg);
        REQUIRE(s.converged);
        return s;
    }();
    return sol;
}

}  // namespace

TEST_CASE("weak form defect is bilinear in the test function") {
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    Rng rng(3);
    const TimeField U = random_time_field(prob.grid(), prob.sym(), pp.cutoff, pp.period, rng);
    const WeakFormContext ctx = make_weak_context(prob, synthesize(U, prob.sample_count()));

    const TestFunction f1 =
        make_test_function(prob.grid(), prob.op(), pp.period, 1, {1.0, 0.5}, 2.5, 1.0);
    const TestFunction f2 =
        make_test_function(prob.grid(), prob.op(), pp.period, 1, {-2.0, 1.5}, 2.0, 0.8);

    const double a = 0.7, b = -1.9;
    RealField bump(f1.bump.size()), shifted(f1.shifted.size());
    for (std::size_t i = 0; i < bump.size(); ++i) {
        bump[i] = a * f1.bump[i] + b * f2.bump[i];
        shifted[i] = a * f1.shifted[i] + b * f2.shifted[i];
    }
    const std::complex<double> combined = weak_form_defect(ctx, 1, bump, shifted);
    const std::complex<double> expected = a * weak_form_defect(ctx, 1, f1.bump, f1.shifted) +
                                          b * weak_form_defect(ctx, 1, f2.bump, f2.shifted);
    CHECK(std::abs(combined - expected) < 1e-12 * (1.0 + std::abs(expected)));
}

TEST_CASE("excluded zero mode kills both sides of the weak form") {
    // a field with odd harmonics only is antiperiodic in T/2, so both the
    // linear and nonlinear side of the k = 0 weak form vanish individually
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    Rng rng(7);

    TimeField U = prob.make_field();
    for (int k : {1, 3})
        for (auto& c : U.mode(k)) {
            std::normal_distribution<double> normal(0.0, 1.0);
            c = {0.0, normal(rng)};
        }
    const WeakFormContext ctx = make_weak_context(prob, synthesize(U, prob.sample_count()));
    const TestFunction tf =
        make_test_function(prob.grid(), prob.op(), pp.period, 0, {1.0, 0.5}, 2.5, 1.0);

    const double tw = ctx.U.time_weight();
    std::complex<double> lhs = 0.0, rhs = 0.0;
    for (int m = 0; m < ctx.U.count(); ++m) {
        lhs += inner(prob.grid(), ctx.U.frames[m], tf.shifted);
        rhs += inner(prob.grid(), ctx.F.frames[m], tf.bump);
    }
    lhs *= tw;
    rhs *= tw;

    const double root_t = std::sqrt(pp.period);
    CHECK(std::abs(lhs) < 1e-10 * ctx.u_l2 * root_t * norm_l2(prob.grid(), tf.shifted));
    CHECK(std::abs(rhs) < 1e-10 * ctx.f_l2 * root_t * norm_l2(prob.grid(), tf.bump));
}

TEST_CASE("weak form handles the zero field and bad test functions") {
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    TimeSamples zero;
    zero.grid = prob.grid();
    zero.period = pp.period;
    zero.frames.assign(8, RealField(prob.grid().size(), 0.0));
    const WeakFormContext ctx = make_weak_context(prob, zero);
    const TestFunction tf =
        make_test_function(prob.grid(), prob.op(), pp.period, 1, {0.0, 0.0}, 2.0, 1.0);
    CHECK(weak_form_residual(ctx, prob.grid(), tf) == 0.0);

    CHECK_THROWS_WITH_AS(make_test_function(prob.grid(), prob.op(), pp.period, 1, {9.0, 0.0},
                                            3.0, 1.0),
                         doctest::Contains("boundary"), Error);
    CHECK_THROWS_AS(make_test_function(prob.grid(), prob.op(), pp.period, 1, {0.0}, 2.0, 1.0),
                    Error);
}

TEST_CASE("identity audit separates construction from criticality") {
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    Rng rng(11);
    const TimeField V = random_time_field(prob.grid(), prob.sym(), pp.cutoff, pp.period, rng);
    const TimeField U = prob.reconstruct_U(V);

    const VerificationReport rep = identity_audit(prob, V, U, 1e-8);
    // construction-level identities hold for any V
    CHECK(rep.find("dual_state_consistency")->pass);
    CHECK(rep.find("duality_roundtrip")->pass);
    CHECK(rep.find("ps_identity")->pass);
    // a random V is nowhere near the Nehari manifold
    CHECK_FALSE(rep.find("nehari_identity")->pass);
    CHECK_FALSE(rep.all_passed());
}

TEST_CASE("ps identity defect vanishes on random fields") {
    const DualProblem prob = small_problem();
    const auto& pp = prob.params();
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        const TimeField V =
            random_time_field(prob.grid(), prob.sym(), pp.cutoff, pp.period, rng);
        CHECK(ps_identity_defect(prob, V) < 1e-10);
    }
}

TEST_CASE("full verification passes on a converged solution") {
    const DualProblem prob = small_problem();
    const Solution& sol = small_solution();
    const VerificationReport rep = verify_solution(prob, sol.V, sol.U, 1e-7, 6, 555);
    for (const CheckEntry& e : rep.entries) {
        CAPTURE(e.name);
        CAPTURE(e.value);
        CHECK(e.pass);
    }
    CHECK(rep.find("critical_point_residual") != nullptr);
    CHECK(rep.find("weak_form_max") != nullptr);
    CHECK(rep.find("polychromatic_modes")->value >= 2.0);
}

TEST_CASE("decay profile recovers a synthetic power law") {
    const DualProblem prob = small_problem();
    const SpaceGrid& g = prob.grid();
    TimeSamples s;
    s.grid = g;
    s.period = prob.params().period;
    s.frames.assign(4, RealField(g.size(), 0.0));
    for (int j = 0; j < g.points; ++j)
        for (int l = 0; l < g.points; ++l) {
            const double x = g.coord(j), y = g.coord(l);
            const double r = std::sqrt(x * x + y * y);
            const double v = r > 0.1 ? std::pow(r, -0.5) : 1.0;
            for (auto& frame : s.frames)
                frame[static_cast<std::size_t>(j) * g.points + l] = v;
        }
    const DecayFit fit = decay_profile(prob, s);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(std::abs(fit.slope + 0.5) < 0.05);
    CHECK(fit.bins >= 3);

    TimeSamples zero = s;
    for (auto& frame : zero.frames) frame.assign(frame.size(), 0.0);
    CHECK_THROWS_WITH_AS(decay_profile(prob, zero), doctest::Contains("no decay signal"),
                         Error);
}

TEST_CASE("assumption report on the small problem") {
    const DualProblem prob = small_problem();
    const AssumptionReport rep = assumption_report(prob, 77);
    for (const CheckEntry& e : rep.report.entries) {
        CAPTURE(e.name);
        CAPTURE(e.value);
        CHECK(e.pass);
    }
    CHECK(rep.C_R > 0.0);
    CHECK(rep.mp.radius > 0.0);
    CHECK(rep.mp.level > 0.0);
    CHECK(rep.report.find("A1_decay_slope")->value <= -0.5 * prob.alpha() + 0.15);
}

TEST_CASE("assumption report rejects a vanishing weight") {
    ProblemParams pp = small_params();
    const DualProblem prob(pp, OperatorSpec::fractional_laplacian(1.0),
                           Potential::constant(pp.make_grid(), 0.0, pp.p, pp.q));
    const AssumptionReport rep = assumption_report(prob, 77);
    CHECK_FALSE(rep.report.all_passed());
    const CheckEntry* a2 = rep.report.find("A2_weight_norm");
    REQUIRE(a2 != nullptr);
    CHECK_FALSE(a2->pass);
    CHECK(a2->note == "weight vanishes identically, Q must not be zero");
    const CheckEntry* slope = rep.report.find("A1_decay_slope");
    REQUIRE(slope != nullptr);
    CHECK_FALSE(slope->pass);
}

TEST_CASE("epsilon refinement does not grow the weak residual") {
    const DualProblem prob = small_problem();
    const Solution& sol = small_solution();
    SolverConfig cfg;
    cfg.tol = 1e-7;
    cfg.max_iter = 800;
    const std::vector<RefinementLevel> levels = epsilon_refinement(prob, cfg, sol, 2, 4, 99);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].epsilon == doctest::Approx(1e-2));
    CHECK(levels[2].epsilon == doctest::Approx(2.5e-3));
    for (std::size_t i = 1; i < levels.size(); ++i) {
        CAPTURE(i);
        CHECK(levels[i].max_weak_residual <=
              1.05 * levels[i - 1].max_weak_residual + 1e-9);
        CHECK(levels[i].residual < 1e-6);
    }
}

TEST_CASE("report rendering") {
    VerificationReport rep;
    rep.add("alpha_check", 0.5, 0.3333, true, "decay exponent");
    rep.add("bad_one", 2.0, 1.0, false, "says \"two\"");
    CHECK(rep.all_passed() == false);
    CHECK(rep.find("alpha_check") != nullptr);
    CHECK(rep.find("missing") == nullptr);

    const std::string text = report_text(rep);
    CHECK(text.find("alpha_check") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("pass") != std::string::npos);

    const std::string csv = report_csv(rep);
    CHECK(csv.rfind("check,value,tolerance,pass,note\n", 0) == 0);
    CHECK(csv.find("\"says \"\"two\"\"\"") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
