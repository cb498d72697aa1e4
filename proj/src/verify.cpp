#include "breather/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

namespace breather {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::complex<double> phasor(long long k, long long m, long long count) {
    long long r = (k * m) % count;
    if (r < 0) r += count;
    const double angle = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(count);
    return {std::cos(angle), std::sin(angle)};
}

void decode_index(const SpaceGrid& grid, std::size_t flat, int* out) {
    for (int d = grid.dim - 1; d >= 0; --d) {
        out[d] = static_cast<int>(flat % grid.points);
        flat /= grid.points;
    }
}

}  // namespace

TestFunction make_test_function(const SpaceGrid& grid, const OperatorSpec& op, double period,
                                int k, const std::vector<double>& center, double radius,
                                double width) {
    grid.validate();
    if (static_cast<int>(center.size()) != grid.dim)
        throw Error("test function: center dimension mismatch");
    if (radius <= 0.0 || width <= 0.0) throw Error("test function: radius and width must be positive");
    if (period <= 0.0) throw Error("test function: period must be positive");
    const double margin = grid.half_width - 2.0 * grid.spacing();
    for (double c : center) {
        if (std::abs(c) + radius > margin)
            throw Error("test function support reaches the box boundary; shrink radius or recenter");
    }

    TestFunction tf;
    tf.k = k;
    tf.center = center;
    tf.radius = radius;
    tf.width = width;
    tf.bump.assign(grid.size(), 0.0);
    int idx[3] = {0, 0, 0};
    const double rho2 = radius * radius;
    const double w2 = width * width;
    for (std::size_t i = 0; i < tf.bump.size(); ++i) {
        decode_index(grid, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            const double dx = grid.coord(idx[d]) - center[d];
            r2 += dx * dx;
        }
        if (r2 >= rho2) continue;
        const double cut = 1.0 - r2 / rho2;
        tf.bump[i] = std::exp(-r2 / w2) * cut * cut * cut;
    }
    const double kappa = 2.0 * kPi * k / period;
    tf.shifted = apply_shifted_symbol(op, grid, kappa, tf.bump);
    return tf;
}

std::vector<TestFunction> random_test_functions(const DualProblem& prob, int count,
                                                std::uint64_t seed) {
    if (count <= 0) throw Error("random_test_functions: count must be positive");
    const SpaceGrid& grid = prob.grid();
    const std::vector<int> ks = mode_set(prob.sym(), prob.params().cutoff);
    if (ks.empty()) throw Error("random_test_functions: empty mode set");

    const double rho_max = grid.half_width - 2.0 * grid.spacing() - 0.25 * grid.half_width - 0.1;
    if (rho_max <= 0.0) throw Error("random_test_functions: box too small for a supported bump");
    const double rho_lo = std::min(2.0, 0.4 * rho_max);
    const double rho_hi = std::min(5.0, rho_max);

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ks.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<TestFunction> out;
    out.reserve(count);
    for (int t = 0; t < count; ++t) {
        const int k = ks[pick(rng)];
        std::vector<double> center(grid.dim);
        for (double& c : center) c = (unit(rng) - 0.5) * 0.5 * grid.half_width;
        const double rho = rho_lo + unit(rng) * (rho_hi - rho_lo);
        const double width = 0.8 + unit(rng) * 1.2;
        out.push_back(make_test_function(grid, prob.op(), prob.params().period, k, center, rho,
                                         width));
    }
    return out;
}

WeakFormContext make_weak_context(const DualProblem& prob, const TimeSamples& U) {
    if (!(U.grid == prob.grid())) throw Error("weak form: sample grid mismatch");
    WeakFormContext ctx;
    ctx.U = U;
    ctx.F.grid = U.grid;
    ctx.F.period = U.period;
    ctx.F.frames.reserve(U.frames.size());
    const RealField& q = prob.weight().values();
    const double p = prob.params().p;
    for (const RealField& frame : U.frames) {
        RealField f(frame.size());
        if (p == 3.0) {
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = q[i] * std::abs(frame[i]) * frame[i];
        } else {
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double a = std::abs(frame[i]);
                f[i] = a > 0.0 ? q[i] * std::pow(a, p - 2.0) * frame[i] : 0.0;
            }
        }
        ctx.F.frames.push_back(std::move(f));
    }
    ctx.u_l2 = std::sqrt(lp_power_integral(ctx.U, 2.0));
    ctx.f_l2 = std::sqrt(lp_power_integral(ctx.F, 2.0));
    return ctx;
}

std::complex<double> weak_form_defect(const WeakFormContext& ctx, int k, const RealField& bump,
                                      const RealField& shifted) {
    const int count = ctx.U.count();
    const double tw = ctx.U.time_weight();
    std::complex<double> lhs{0.0, 0.0};
    std::complex<double> rhs{0.0, 0.0};
    for (int m = 0; m < count; ++m) {
        const std::complex<double> ph = phasor(k, m, count);
        lhs += ph * inner(ctx.U.grid, ctx.U.frames[m], shifted);
        rhs += ph * inner(ctx.F.grid, ctx.F.frames[m], bump);
    }
    return (lhs - rhs) * tw;
}

double weak_form_scale(const WeakFormContext& ctx, const SpaceGrid& grid, const RealField& bump,
                       const RealField& shifted) {
    const double root_t = std::sqrt(ctx.U.period);
    return ctx.u_l2 * root_t * norm_l2(grid, shifted) + ctx.f_l2 * root_t * norm_l2(grid, bump);
}

double weak_form_residual(const WeakFormContext& ctx, const SpaceGrid& grid,
                          const TestFunction& tf) {
    const double scale = weak_form_scale(ctx, grid, tf.bump, tf.shifted);
    if (scale == 0.0) return 0.0;
    return std::abs(weak_form_defect(ctx, tf.k, tf.bump, tf.shifted)) / scale;
}

SmoothTestResult weak_form_smooth_test(const DualProblem& prob, const WeakFormContext& ctx,
                                       int cutoff, const RealField& bump,
                                       const RealField& laplacian_bump) {
    const SpaceGrid& grid = prob.grid();
    const int count = ctx.U.count();
    const double period = ctx.U.period;
    const double tw = ctx.U.time_weight();
    const double base_freq = 2.0 * kPi / period;

    // theta(t) = exp(cos(2 pi t / T) - 1): analytic, 1-periodic in t/T
    std::vector<double> theta(count), theta_dd(count);
    for (int m = 0; m < count; ++m) {
        const double tau = 2.0 * kPi * m / count;
        theta[m] = std::exp(std::cos(tau) - 1.0);
        const double s = std::sin(tau);
        const double c = std::cos(tau);
        theta_dd[m] = base_freq * base_freq * (s * s - c) * theta[m];
    }

    double lhs = 0.0;
    double rhs = 0.0;
    double theta_sq = 0.0;
    double theta_dd_sq = 0.0;
    for (int m = 0; m < count; ++m) {
        lhs += theta_dd[m] * inner(grid, ctx.U.frames[m], bump);
        lhs += theta[m] * inner(grid, ctx.U.frames[m], laplacian_bump);
        rhs += theta[m] * inner(grid, ctx.F.frames[m], bump);
        theta_sq += theta[m] * theta[m];
        theta_dd_sq += theta_dd[m] * theta_dd[m];
    }
    lhs *= tw;
    rhs *= tw;
    const double theta_l2 = std::sqrt(tw * theta_sq);
    const double theta_dd_l2 = std::sqrt(tw * theta_dd_sq);

    const double bump_l2 = norm_l2(grid, bump);
    const double lap_l2 = norm_l2(grid, laplacian_bump);
    const double scale = ctx.u_l2 * (theta_dd_l2 * bump_l2 + theta_l2 * lap_l2) +
                         ctx.f_l2 * theta_l2 * bump_l2;

    SmoothTestResult result;
    if (scale == 0.0) return result;
    result.residual = std::abs(lhs - rhs) / scale;

    // Fourier coefficients of theta on the sample lattice; the neglected
    // |j| > cutoff terms are bounded through Cauchy-Schwarz per mode.
    const double root_t = std::sqrt(period);
    double tail = 0.0;
    for (int j = cutoff + 1; j <= count / 2; ++j) {
        std::complex<double> coeff{0.0, 0.0};
        for (int m = 0; m < count; ++m) coeff += theta[m] * phasor(j, m, count);
        const double magnitude = std::abs(coeff) / count;
        const double kappa = base_freq * j;
        const double mult = (2 * j == count) ? 1.0 : 2.0;
        tail += mult * magnitude *
                (ctx.u_l2 * root_t * (lap_l2 + kappa * kappa * bump_l2) +
                 ctx.f_l2 * root_t * bump_l2);
    }
    result.tail_estimate = tail / scale;
    return result;
}

void VerificationReport::add(std::string name, double value, double tolerance, bool pass,
                             std::string note) {
    entries.push_back({std::move(name), value, tolerance, pass, std::move(note)});
}

bool VerificationReport::all_passed() const {
    for (const CheckEntry& e : entries)
        if (!e.pass) return false;
    return true;
}

const CheckEntry* VerificationReport::find(const std::string& name) const {
    for (const CheckEntry& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

std::string report_text(const VerificationReport& report) {
    std::string out;
    char line[512];
    for (const CheckEntry& e : report.entries) {
        std::snprintf(line, sizeof(line), "%-28s %14.6e  tol %-12.4g %s", e.name.c_str(), e.value,
                      e.tolerance, e.pass ? "pass" : "FAIL");
        out += line;
        if (!e.note.empty()) {
            out += "  # ";
            out += e.note;
        }
        out += '\n';
    }
    return out;
}

std::string report_csv(const VerificationReport& report) {
    std::string out = "check,value,tolerance,pass,note\n";
    char buf[128];
    for (const CheckEntry& e : report.entries) {
        out += e.name;
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%d,\"", e.value, e.tolerance,
                      e.pass ? 1 : 0);
        out += buf;
        for (char c : e.note) {
            if (c == '"') out += "\"\"";
            else out += c;
        }
        out += "\"\n";
    }
    return out;
}

double ps_identity_defect(const DualProblem& prob, const TimeField& V) {
    const double pc = prob.params().p_conj();
    const TimeSamples vs = synthesize(V, prob.sample_count());
    const double lp_power = lp_power_integral(vs, pc);
    const double pairing = pairing_modal(V, prob.big_R_apply(V));
    const double derivative = lp_power - pairing;  // J'(V)[V]
    const double j_value = j_combine(lp_power, pairing, pc);
    const double lhs = derivative - 2.0 * j_value;
    const double rhs = (1.0 - 2.0 / pc) * lp_power;
    const double scale = std::max({lp_power, std::abs(pairing), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

VerificationReport identity_audit(const DualProblem& prob, const TimeField& V, const TimeField& U,
                                  double solver_tol) {
    VerificationReport rep;
    const double p = prob.params().p;
    const double pc = prob.params().p_conj();
    const int count = prob.sample_count();
    const RealField& root_p = prob.weight().root_p();

    // (a) Q^{1/p}U against |V|^{p'-2}V on samples. The pointwise power of a
    // band-limited field is not band-limited, so the attainable agreement is
    // set by the out-of-band tail of |V|^{p'-2}V plus the Euler-Lagrange
    // defect; both scales are measured here and form the tolerance.
    TimeSamples w = synthesize(U, count);
    for (RealField& frame : w.frames)
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] *= root_p[i];
    const TimeSamples vs_stored = synthesize(V, count);
    const TimeSamples forward = prob.duality_forward(vs_stored);
    const double fwd_norm = lp_norm(forward, p);
    double identity_defect = 0.0;
    double identity_tol = 1e-10;
    if (fwd_norm > 0.0) {
        identity_defect = lp_norm(add_scaled(w, forward, -1.0), p) / fwd_norm;
        const TimeField fwd_band = analyze(forward, prob.sym(), prob.params().cutoff);
        const double tail =
            lp_norm(add_scaled(forward, synthesize(fwd_band, count), -1.0), p) / fwd_norm;
        identity_tol = 5.0 * tail + 10.0 * solver_tol;
    }
    rep.add("duality_identity", identity_defect, identity_tol,
            identity_defect <= identity_tol,
            "Q^{1/p} U against |V|^{p'-2} V on samples; tolerance from the measured "
            "band-truncation tail");

    // The resolvent path of the stored pair: Q^{1/p}U must equal R[V] in the
    // mode band, which pins U as the resolvent image of the dual state.
    const TimeField w_band = analyze(w, prob.sym(), prob.params().cutoff);
    const TimeField rv = prob.big_R_apply(V);
    const double rv_norm = l2_norm(rv);
    const double consistency =
        rv_norm > 0.0 ? l2_norm(add_scaled(w_band, rv, -1.0)) / rv_norm : l2_norm(w_band);
    rep.add("dual_state_consistency", consistency, 1e-10, consistency <= 1e-10,
            "Q^{1/p} U against R[V] in the mode band");

    // Round trip on an independent band-limited field.
    const TimeSamples probe = synthesize(prob.big_R_apply(V), count);
    const double probe_norm = lp_norm(probe, p);
    const TimeSamples loop = prob.duality_forward(prob.duality_inverse(probe));
    const double roundtrip =
        probe_norm > 0.0 ? lp_norm(add_scaled(loop, probe, -1.0), p) / probe_norm : 0.0;
    rep.add("duality_roundtrip", roundtrip, 1e-10, roundtrip <= 1e-10,
            "forward then inverse duality map on R[V]");

    const double ps_defect = ps_identity_defect(prob, V);
    rep.add("ps_identity", ps_defect, 1e-10, ps_defect <= 1e-10,
            "J'(V)[V] - 2 J(V) against (1 - 2/p') int |V|^{p'}");

    const TimeSamples vs = synthesize(V, count);
    const double lp_power = lp_power_integral(vs, pc);
    const double pairing = pairing_modal(V, prob.big_R_apply(V));
    const double nehari_tol = std::max(1e-8, 10.0 * solver_tol);
    const double nehari =
        lp_power > 0.0 ? std::abs(lp_power - pairing) / lp_power : kInf;
    rep.add("nehari_identity", nehari, nehari_tol, nehari <= nehari_tol,
            "int |V|^{p'} against <V, R V>");

    const double j_value = j_combine(lp_power, pairing, pc);
    rep.add("j_positive", j_value, 0.0, j_value > 0.0, "dual functional value");

    // ||V||_{p'}^{p'-1} <= ||Q||_{q/(q-p)}^{1/p} ||U||_{L^p_t L^q_x} holds with
    // the same quadrature on both sides (discrete Hoelder).
    TimeSamples u_samples = synthesize(U, count);
    const double lhs = std::pow(lp_power, 1.0 / p);
    const double rhs =
        std::pow(prob.weight().weight_norm(), 1.0 / p) * mixed_norm(u_samples, prob.params().q, p);
    const double ratio = rhs > 0.0 ? lhs / rhs : kInf;
    rep.add("unboundedness_bound", ratio, 1.0, ratio <= 1.0 + 1e-9,
            "||V||_{p'}^{p'-1} / (||Q||_{q/(q-p)}^{1/p} ||U||_{p,q}) <= 1");

    return rep;
}

DecayFit decay_profile(const DualProblem& prob, const TimeSamples& U) {
    const SpaceGrid& grid = prob.grid();
    if (!(U.grid == grid)) throw Error("decay_profile: sample grid mismatch");
    const double p = prob.params().p;
    const double tw = U.time_weight();

    // Pointwise L^p(T) norm of the signal.
    RealField acc(grid.size(), 0.0);
    for (const RealField& frame : U.frames) {
        if (p == 3.0) {
            for (std::size_t i = 0; i < acc.size(); ++i) {
                const double a = std::abs(frame[i]);
                acc[i] += a * a * a;
            }
        } else {
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += std::pow(std::abs(frame[i]), p);
        }
    }
    for (double& a : acc) a = std::pow(tw * a, 1.0 / p);

    const int bins = 24;
    const double r_lo = 0.25 * grid.half_width;
    const double r_hi = 0.5 * grid.half_width;
    std::vector<double> sum(bins, 0.0), radius_sum(bins, 0.0);
    std::vector<int> hits(bins, 0);
    int idx[3] = {0, 0, 0};
    for (std::size_t i = 0; i < acc.size(); ++i) {
        decode_index(grid, i, idx);
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            const double x = grid.coord(idx[d]);
            r2 += x * x;
        }
        const double r = std::sqrt(r2);
        if (r < r_lo || r >= r_hi) continue;
        const int b = std::min(bins - 1, static_cast<int>((r - r_lo) / (r_hi - r_lo) * bins));
        sum[b] += acc[i];
        radius_sum[b] += r;
        hits[b] += 1;
    }

    std::vector<double> radii, values;
    double peak = 0.0;
    for (int b = 0; b < bins; ++b) {
        if (hits[b] == 0) continue;
        const double avg = sum[b] / hits[b];
        peak = std::max(peak, avg);
        radii.push_back(radius_sum[b] / hits[b]);
        values.push_back(avg);
    }
    if (radii.size() < 3 || peak < 1e-12) throw Error("no decay signal");

    // Drop bins that fell to roundoff level; they would dominate the log fit.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (values[i] > 1e-13 * peak) {
            xs.push_back(radii[i]);
            ys.push_back(values[i]);
        }
    }
    if (xs.size() < 3) throw Error("no decay signal");

    const LogLogFit fit = fit_loglog(xs, ys);
    return {fit.slope, fit.rms_residual, static_cast<int>(xs.size())};
}

AssumptionReport assumption_report(const DualProblem& prob, std::uint64_t seed) {
    AssumptionReport out;
    const double p = prob.params().p;
    const double alpha = prob.alpha();
    const Potential& weight = prob.weight();

    out.report.add("A1_alpha", alpha, 1.0 - 2.0 / p, alpha > 1.0 - 2.0 / p,
                   "resolvent decay exponent, must exceed 1 - 2/p");

    const bool zero_weight = weight.is_zero();
    out.report.add("A2_weight_norm", weight.weight_norm(), kInf,
                   !zero_weight && std::isfinite(weight.weight_norm()),
                   zero_weight ? "weight vanishes identically, Q must not be zero"
                               : "||Q||_{q/(q-p)} on the finite box; decay beyond the box is "
                                 "assumed, not checked");
    out.report.add("A2_interior_mass", weight.interior_mass_fraction(), kInf, true,
                   "fraction of the mass of Q inside |x| < L/2");

    for (const auto& [k, value] : prob.check_A3()) {
        out.report.add("A3_mode_" + std::to_string(k), value, 0.0, value > 0.0,
                       zero_weight ? "weight vanishes identically, Q must not be zero"
                                   : "<omega, R_k^Q omega> for the shell trial field");
    }

    if (zero_weight) {
        out.report.add("A1_decay_slope", 0.0, 0.0, false,
                       "norm decay not measurable, weight vanishes identically");
        return out;
    }

    const int k_max = std::max(prob.params().cutoff, 15);
    out.decay = prob.norm_decay_report(k_max, 16, 16, seed);
    const double slope_tol = -0.5 * alpha + 0.15;
    char note[160];
    std::snprintf(note, sizeof(note),
                  "log ||R_k^Q||_{p'->p} against log(k^2+1); target slope -alpha/2 = %.4g, rms %.2e",
                  -0.5 * alpha, out.decay.fit.rms_residual);
    out.report.add("A1_decay_slope", out.decay.fit.slope, slope_tol,
                   out.decay.fit.slope <= slope_tol, note);

    out.C_R = prob.cauchy_constant(out.decay);
    out.report.add("A1_cauchy_constant", out.C_R, kInf, std::isfinite(out.C_R) && out.C_R > 0.0,
                   "aggregated resolvent bound C_R over the mode band");

    out.mp = mountain_pass_constants(out.C_R, prob.params().p_conj());
    out.report.add("mp_radius", out.mp.radius, kInf, out.mp.radius > 0.0,
                   "mountain pass radius r = (C_R p')^{-1/(2-p')}");
    out.report.add("mp_level", out.mp.level, kInf, out.mp.level > 0.0,
                   "mountain pass level delta = r^{p'} / (2 p')");
    return out;
}

VerificationReport verify_solution(const DualProblem& prob, const TimeField& V,
                                   const TimeField& U, double solver_tol, int weak_count,
                                   std::uint64_t seed) {
    VerificationReport rep = identity_audit(prob, V, U, solver_tol);

    const double p = prob.params().p;
    const double pc = prob.params().p_conj();
    const int count = prob.sample_count();

    // Euler-Lagrange residual recomputed from the stored dual state: the
    // gradient J'(V) within the truncated mode band.
    const TimeSamples v_samples = synthesize(V, count);
    const double lp_power = lp_power_integral(v_samples, pc);
    const double residual_scale = lp_power > 0.0 ? std::pow(lp_power, 1.0 / p) : 1.0;
    const double residual =
        lp_norm(synthesize(prob.gradient_J(V), count), p) / residual_scale;
    rep.add("critical_point_residual", residual, solver_tol, residual <= solver_tol,
            "J'(V) in L^p within the mode band, recomputed from the stored state");

    // Weak form against a randomized family of compactly supported test
    // functions, one frequency each.
    const TimeSamples u_samples = synthesize(U, count);
    const WeakFormContext ctx = make_weak_context(prob, u_samples);
    const double weak_tol = std::max(1e-6, 5.0 * prob.params().epsilon);
    const std::vector<TestFunction> family = random_test_functions(prob, weak_count, seed);
    double weak_max = 0.0;
    for (const TestFunction& tf : family)
        weak_max = std::max(weak_max, weak_form_residual(ctx, prob.grid(), tf));
    char note[120];
    std::snprintf(note, sizeof(note), "max over %d random space-time test functions", weak_count);
    rep.add("weak_form_max", weak_max, weak_tol, weak_max <= weak_tol, note);

    // One analytic-in-time profile exercising every temporal mode at once.
    const double rho = std::min(5.0, prob.grid().half_width - 2.0 * prob.grid().spacing() - 0.1);
    const TestFunction smooth_bump = make_test_function(
        prob.grid(), prob.op(), prob.params().period, 0, std::vector<double>(prob.grid().dim, 0.0),
        rho, 1.5);
    const RealField lap = apply_shifted_symbol(prob.op(), prob.grid(), 0.0, smooth_bump.bump);
    const SmoothTestResult smooth =
        weak_form_smooth_test(prob, ctx, prob.params().cutoff, smooth_bump.bump, lap);
    rep.add("weak_form_smooth", smooth.residual, weak_tol, smooth.residual <= weak_tol,
            "analytic time profile exp(cos(2 pi t/T) - 1) times a centered bump");
    rep.add("weak_form_k_tail", smooth.tail_estimate, kInf, true,
            "bound on the neglected |k| > K part of the smooth profile");

    // Polychromaticity: sine classes must carry at least two active modes.
    const std::vector<std::pair<int, double>> energies = mode_energies(U, 2.0);
    double peak = 0.0;
    for (const auto& [k, e] : energies) peak = std::max(peak, e);
    int active = 0;
    for (const auto& [k, e] : energies)
        if (e > 1e-6 * peak) ++active;
    const int sym_index = prob.sym().index;
    const bool sine_class = sym_index == 3 || sym_index == 5;
    rep.add("polychromatic_modes", static_cast<double>(active), 2.0,
            !sine_class || active >= 2,
            sine_class ? "active modes (energy above 1e-6 of peak), lower bound 2"
                       : "active mode count, informational for this class");

    try {
        const DecayFit fit = decay_profile(prob, u_samples);
        const double target = 0.5 * (1.0 - prob.params().dim);
        std::snprintf(note, sizeof(note),
                      "radial log-log slope over [L/4, L/2], %d bins, rms %.2e; free-decay "
                      "benchmark %.3g +- 0.25: %s",
                      fit.bins, fit.rms_residual, target,
                      std::abs(fit.slope - target) <= 0.25 ? "within" : "outside");
        rep.add("decay_slope", fit.slope, kInf, true, note);
    } catch (const Error&) {
        rep.add("decay_slope", 0.0, kInf, true, "no decay signal in the annulus [L/4, L/2]");
    }

    return rep;
}

std::vector<RefinementLevel> epsilon_refinement(const DualProblem& prob,
                                                const SolverConfig& config, const Solution& base,
                                                int levels, int weak_count, std::uint64_t seed) {
    if (levels < 1) throw Error("epsilon_refinement: need at least one level");
    if (prob.params().epsilon <= 0.0)
        throw Error("epsilon_refinement: base problem must have epsilon > 0");

    const auto weak_max = [&](const DualProblem& problem, const Solution& sol) {
        const TimeSamples u_samples = synthesize(sol.U, problem.sample_count());
        const WeakFormContext ctx = make_weak_context(problem, u_samples);
        double value = 0.0;
        for (const TestFunction& tf : random_test_functions(problem, weak_count, seed))
            value = std::max(value, weak_form_residual(ctx, problem.grid(), tf));
        return value;
    };

    std::vector<RefinementLevel> out;
    out.push_back({prob.params().epsilon, base.residual, base.J_value, weak_max(prob, base)});

    ProblemParams refined = prob.params();
    TimeField warm = base.V;
    for (int level = 1; level <= levels; ++level) {
        refined.epsilon = prob.params().epsilon / std::pow(2.0, level);
        DualProblem sharper(refined, prob.op(), prob.weight());
        SolverConfig cfg = config;
        cfg.scheme = Scheme::NehariFixedPoint;
        Solution sol = iterate_fixed_point(sharper, cfg, &warm);
        out.push_back({refined.epsilon, sol.residual, sol.J_value, weak_max(sharper, sol)});
        warm = sol.V;
    }
    return out;
}

}  // namespace breather
