#include "breather/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <cstdio>
#include <cstdlib>

namespace breather {

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_iter < 1) throw ConfigError("solver max_iter must be at least 1");
    if (!(mixing > 0.0) || mixing > 1.0) throw ConfigError("solver mixing must lie in (0, 1]");
    if (!(backtrack > 0.0) || !(backtrack < 1.0))
        throw ConfigError("solver backtrack factor must lie in (0, 1)");
    if (!(armijo_c > 0.0) || !(armijo_c < 1.0))
        throw ConfigError("solver armijo constant must lie in (0, 1)");
    if (!(initial_step > 0.0)) throw ConfigError("solver initial step must be positive");
    if (deflation_count < 1) throw ConfigError("solver deflation count must be at least 1");
    if (reseed_limit < 1) throw ConfigError("solver reseed limit must be at least 1");
    if (noise_scale < 0.0) throw ConfigError("solver noise scale must be nonnegative");
    if (!(deflation_angle >= 0.0)) throw ConfigError("deflation angle must be nonnegative");
    if (!(deflation_damping >= 0.0) || deflation_damping > 1.0)
        throw ConfigError("deflation damping must lie in [0, 1]");
}

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct IdentityPrec {
    const TimeField& operator()(const TimeField& r) const { return r; }
};

// Minimum-residual solve of the symmetric (indefinite) system apply(x) = b in
// the modal pairing metric, with an optional SPD preconditioner (prec applies
// M^{-1}; residuals are then measured in the M^{-1} norm). Returns the last
// iterate; rel_tol is on ||r||/||b||. A positive max_norm truncates the Krylov
// sweep once the iterate norm crosses it and returns the point on that sphere
// (trust-region cap: the extreme Hessian eigenvalues are resolved first, so
// the cap keeps the stiff, reliable part of the Newton step).
template <typename Apply, typename Prec = IdentityPrec>
TimeField minres_solve(const DualProblem& prob, Apply&& apply, const TimeField& b,
                       double rel_tol, int max_iter, double* achieved = nullptr,
                       int* used = nullptr, double max_norm = 0.0, bool* capped = nullptr,
                       Prec&& prec = Prec{}) {
    TimeField x = prob.make_field();
    if (achieved) *achieved = 0.0;
    if (used) *used = 0;
    if (capped) *capped = false;
    TimeField z = prec(b);
    const double bz = pairing_modal(b, z);
    const double beta1 = std::sqrt(std::max(0.0, bz));
    if (!(beta1 > 0.0) || !std::isfinite(beta1)) return x;

    TimeField q_prev = prob.make_field();
    TimeField q = scaled(b, 1.0 / beta1);
    TimeField pdir = scaled(z, 1.0 / beta1);
    TimeField w0 = prob.make_field();
    TimeField w1 = prob.make_field();
    double beta = 0.0;
    double eta = beta1;
    double gamma0 = 1.0, gamma1 = 1.0;
    double sigma0 = 0.0, sigma1 = 0.0;

    for (int j = 0; j < max_iter; ++j) {
        TimeField aq = apply(pdir);
        const double alpha = pairing_modal(pdir, aq);
        aq = add_scaled(aq, q, -alpha);
        if (j > 0) aq = add_scaled(aq, q_prev, -beta);
        z = prec(aq);
        const double beta_next = std::sqrt(std::max(0.0, pairing_modal(aq, z)));

        const double delta = gamma1 * alpha - gamma0 * sigma1 * beta;
        const double rho1 = std::sqrt(delta * delta + beta_next * beta_next);
        const double rho2 = sigma1 * alpha + gamma0 * gamma1 * beta;
        const double rho3 = sigma0 * beta;
        if (!(rho1 > 0.0) || !std::isfinite(rho1)) break;
        const double gamma_next = delta / rho1;
        const double sigma_next = beta_next / rho1;

        TimeField w = scaled(add_scaled(add_scaled(pdir, w0, -rho3), w1, -rho2), 1.0 / rho1);
        const double step = gamma_next * eta;
        if (max_norm > 0.0) {
            const double ww = pairing_modal(w, w);
            const double xw = pairing_modal(x, w);
            const double xx = pairing_modal(x, x);
            if (xx + 2.0 * step * xw + step * step * ww > max_norm * max_norm) {
                // intersect the update ray with the trust sphere; the previous
                // iterate is inside it, so the two roots straddle zero and the
                // one matching the step sign is the crossing actually taken
                const double a = ww, bq = 2.0 * xw, c = xx - max_norm * max_norm;
                const double disc = std::max(0.0, bq * bq - 4.0 * a * c);
                const double tau = a > 0.0 ? (step >= 0.0 ? (-bq + std::sqrt(disc)) / (2.0 * a)
                                                          : (-bq - std::sqrt(disc)) / (2.0 * a))
                                           : 0.0;
                x = add_scaled(x, w, tau);
                if (capped) *capped = true;
                if (used) *used = j + 1;
                break;
            }
        }
        x = add_scaled(x, w, step);
        eta = -sigma_next * eta;

        if (achieved) *achieved = std::abs(eta) / beta1;
        if (used) *used = j + 1;
        if (std::abs(eta) < rel_tol * beta1 || beta_next < 1e-300) break;
        q_prev = std::move(q);
        q = scaled(aq, 1.0 / beta_next);
        pdir = scaled(z, 1.0 / beta_next);
        w0 = std::move(w1);
        w1 = std::move(w);
        gamma0 = gamma1;
        gamma1 = gamma_next;
        sigma0 = sigma1;
        sigma1 = sigma_next;
        beta = beta_next;
    }
    return x;
}

std::vector<int> positive_modes(const SymmetryClass& sym, int count, int cutoff_hint) {
    std::vector<int> ks;
    for (int k = 1; static_cast<int>(ks.size()) < count; ++k) {
        if (k > 64 * (cutoff_hint + 1)) break;
        if (sym.contains(k)) ks.push_back(k);
    }
    if (static_cast<int>(ks.size()) < count)
        throw Error("symmetry class does not contain enough positive modes");
    return ks;
}

}  // namespace

MPGBasis build_mpg_basis(const DualProblem& prob, int count) {
    if (count < 1) throw Error("mpg basis: count must be at least 1");
    const SpaceGrid& grid = prob.grid();
    const double pi = std::numbers::pi;

    MPGBasis basis;
    basis.ks = positive_modes(prob.sym(), count, prob.params().cutoff);
    const double sigma = prob.weight_spectral_width();
    for (int k : basis.ks) {
        const double kappa = 2.0 * pi * k / prob.params().period;

        const double margin = 2.2 * sigma + 0.5;
        const double xi0 = prob.resonant_radius(kappa);

        // Candidate positive-cone wave packets, tried in order; all sit a
        // weight-spectral-width margin above the resonant sphere so the
        // weighted form keeps clear of the sign change of the multiplier.
        std::vector<RealField> presets;
        presets.push_back(prob.a3_trial_field(k));
        presets.push_back(radial_packet(grid, xi0 + 1.5 * margin, std::max(0.5, 0.5 * margin)));
        presets.push_back(radial_packet(grid, xi0 + 2.5 * margin, std::max(0.7, 0.8 * margin)));

        bool placed = false;
        for (RealField& w : presets) {
            const double form = inner(grid, w, prob.bs_apply(k, w));
            if (!(form > 0.0) || !std::isfinite(form)) continue;
            const double scale = std::sqrt((2.0 / pi) / form);
            for (double& x : w) x *= scale;
            basis.omegas.push_back(std::move(w));
            placed = true;
            break;
        }
        if (!placed)
            throw Error("mode k = " + std::to_string(k) +
                        ": every positivity trial of the quadratic form failed (A3); no "
                        "mountain-pass direction available");
    }
    return basis;
}

TimeField mpg_direction(const DualProblem& prob, const MPGBasis& basis, std::size_t index) {
    if (index >= basis.ks.size()) throw Error("mpg basis index out of range");
    const int k = basis.ks[index];
    TimeField field = prob.make_field();
    if (!field.has_mode(k)) throw Error("mpg basis mode is outside the cutoff band");
    ComplexField& mode = field.mode(k);
    const RealField& w = basis.omegas[index];
    const bool sine = prob.sym().index == 3 || prob.sym().index == 5;
    for (std::size_t i = 0; i < mode.size(); ++i)
        mode[i] = sine ? std::complex<double>(0.0, -0.5 * w[i])
                       : std::complex<double>(0.5 * w[i], 0.0);
    return field;
}

std::vector<double> mpg_radii(const DualProblem& prob, const MPGBasis& basis, double C_R,
                              std::uint64_t seed) {
    const double pc = prob.params().p_conj();
    const double r = mountain_pass_constants(C_R, pc).radius;
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<TimeField> dirs;
    std::vector<double> radii;
    for (std::size_t m = 0; m < basis.ks.size(); ++m) {
        dirs.push_back(mpg_direction(prob, basis, m));
        double c = 1.0;
        auto consider = [&](const std::vector<double>& beta) {
            double b2 = 0.0;
            for (double b : beta) b2 += b * b;
            if (b2 == 0.0) return;
            TimeField X = prob.make_field();
            for (std::size_t j = 0; j < dirs.size(); ++j) X = add_scaled(X, dirs[j], beta[j]);
            const double nv = lp_norm(synthesize(X, prob.sample_count()), pc) / std::sqrt(b2);
            c = std::max({c, nv, 1.0 / nv});
        };
        for (std::size_t j = 0; j <= m; ++j) {
            std::vector<double> e(m + 1, 0.0);
            e[j] = 1.0;
            consider(e);
        }
        for (int t = 0; t < 16; ++t) {
            std::vector<double> beta(m + 1);
            for (double& b : beta) b = normal(rng);
            consider(beta);
        }
        radii.push_back(std::max(r, std::pow(c * c / pc, 1.0 / (2.0 - pc))));
    }
    return radii;
}

NehariRescale nehari_rescale(const DualProblem& prob, const TimeField& V) {
    const double pc = prob.params().p_conj();
    const double num = lp_power_integral(synthesize(V, prob.sample_count()), pc);
    const double den = pairing_modal(V, prob.big_R_apply(V));
    if (!(den > 0.0) || !(num > 0.0))
        throw Error("not in the positive cone; reseed initial guess");
    const double t = std::pow(num / den, 1.0 / (2.0 - pc));
    return {t, scaled(V, t)};
}

double RayProfile::j_at(double beta) const {
    return a * std::pow(beta, p_conj) - b * beta * beta;
}

double RayProfile::maximizer() const {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("ray profile has no interior maximum");
    return std::pow(p_conj * a / (2.0 * b), 1.0 / (2.0 - p_conj));
}

RayProfile ray_profile(const DualProblem& prob, const TimeField& direction) {
    RayProfile prof;
    prof.p_conj = prob.params().p_conj();
    prof.a = lp_power_integral(synthesize(direction, prob.sample_count()), prof.p_conj) /
             prof.p_conj;
    prof.b = 0.5 * pairing_modal(direction, prob.big_R_apply(direction));
    return prof;
}

double path_maximum(const RayProfile& profile, double beta_end) {
    if (!(profile.b > 0.0))
        throw Error("not in the positive cone; reseed initial guess");
    if (!(beta_end > 0.0)) throw Error("path endpoint must be positive");
    double end = beta_end;
    int grow = 0;
    while (profile.j_at(end) >= 0.0) {
        end *= 2.0;
        if (++grow > 60) throw Error("mountain pass path endpoint never went negative");
    }
    const int scan = 128;
    int best = 0;
    double best_j = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double j = profile.j_at(end * i / scan);
        if (j > best_j) {
            best_j = j;
            best = i;
        }
    }
    if (best == 0) throw Error("mountain pass path maximum sits at the origin");
    if (best == scan) throw Error("mountain pass path maximum sits at the endpoint");
    double lo = end * (best - 1) / scan;
    double hi = end * (best + 1) / scan;
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = profile.j_at(x1), f2 = profile.j_at(x2);
    while (hi - lo > 1e-12 * end) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = profile.j_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = profile.j_at(x1);
        }
    }
    return 0.5 * (lo + hi);
}

double solution_angle(const DualProblem& prob, const TimeField& a, const TimeField& b) {
    const double aa = pairing_modal(a, prob.big_R_apply(a));
    const double bb = pairing_modal(b, prob.big_R_apply(b));
    const double ab = pairing_modal(a, prob.big_R_apply(b));
    if (!(aa > 0.0) || !(bb > 0.0)) throw Error("solution angle needs positive-cone fields");
    const double c = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
    return std::acos(c);
}

namespace {

struct DeflationTarget {
    TimeField band;
    TimeField big_R;
    double pairing = 0.0;
};

TimeField initial_guess(const DualProblem& prob, const SolverConfig& cfg, std::size_t dir_index,
                        Rng& rng) {
    MPGBasis basis = build_mpg_basis(prob, static_cast<int>(dir_index) + 1);
    TimeField guess = mpg_direction(prob, basis, dir_index);
    if (cfg.noise_scale > 0.0) {
        TimeField noise = random_time_field(prob.grid(), prob.sym(), prob.params().cutoff,
                                            prob.params().period, rng);
        const double ng = l2_norm(guess);
        const double nn = l2_norm(noise);
        if (nn > 0.0) guess = add_scaled(guess, noise, cfg.noise_scale * ng / nn);
    }
    return guess;
}

Solution package_solution(const DualProblem& prob, const TimeField& band, double tol,
                          std::vector<IterationRecord> history, bool loop_converged) {
    const double p = prob.params().p;
    const double pc = prob.params().p_conj();
    const int M = prob.sample_count();

    // U is the per-mode resolvent image of the weighted dual state; every
    // stored identity (Q^{1/p}U = R[V] on samples, the weak form) then follows
    // along the same linear transform path the verifier replays.
    TimeField U = prob.reconstruct_U(band);
    TimeSamples Vs = synthesize(band, M);

    // E-L residual of the returned state: the band-limited gradient J'(V)
    const double pp = lp_power_integral(Vs, pc);
    const double gnorm_p = lp_norm(synthesize(prob.gradient_J(band), M), p);
    const double residual = pp > 0.0 ? gnorm_p / std::pow(pp, 1.0 / p) : gnorm_p;

    Solution sol{.V = band, .U = U};
    sol.J_value = prob.functional_J(band);
    sol.residual = residual;
    sol.iterations = history.empty() ? 0 : history.back().iter;
    sol.converged = loop_converged && residual < tol;
    sol.nehari_t = history.empty() ? 1.0 : history.back().nehari_t;
    sol.history = std::move(history);
    sol.mode_energy = mode_energies(band, pc);
    return sol;
}

// State of the scale-invariant quotient
//     Rq(V) = num(V)^{2/(2-p')} / den(V)^{p'/(2-p')},
//     num = integral |V|^{p'},  den = <V, R V>,
// whose critical rays are exactly the Nehari-normalised critical points of J.
// Rq stays +inf outside the positive cone (den <= 0), which is the barrier
// both descent schemes rely on.
struct QuotientState {
    TimeSamples Vsamp;
    TimeField W;
    double num = 0.0;
    double den = 0.0;
    double Rq = std::numeric_limits<double>::infinity();
};

QuotientState quotient_eval(const DualProblem& prob, const TimeField& X) {
    const double pc = prob.params().p_conj();
    QuotientState st{synthesize(X, prob.sample_count()), prob.big_R_apply(X)};
    st.num = lp_power_integral(st.Vsamp, pc);
    st.den = pairing_modal(X, st.W);
    if (st.num > 0.0 && st.den > 0.0 && std::isfinite(st.num) && std::isfinite(st.den))
        st.Rq = std::pow(st.num, 2.0 / (2.0 - pc)) / std::pow(st.den, pc / (2.0 - pc));
    return st;
}

// Terminal phase shared by both schemes: semi-smooth Newton on the band
// gradient J'(V), with preconditioned MINRES solves of the frozen Hessian
//     H = analyze((p'-1)|V|^{p'-2} synth .) - R.
// The dual energy curvature |V|^{p'-2} (p'-2 < 0) is unbounded where the
// synthesized field is small, i.e. on the far-field ringing of a localized
// solution, so H carries a continuum of huge eigenvalues there and plain
// Krylov iterations crawl. The SPD preconditioner 1/(curvature + bulk scale)
// flattens that stiffness to O(1) without disturbing the moderate part of
// the spectrum. V enters in critical-point coordinates (Nehari rescale
// already folded in) and is polished in place down to tol.
bool newton_polish(const DualProblem& prob, TimeField& V, double tol, int max_iter,
                   int& iter, std::vector<IterationRecord>& history, double start_ms) {
    const double p = prob.params().p;
    const double pc = prob.params().p_conj();
    const int M = prob.sample_count();

    QuotientState st = quotient_eval(prob, V);
    if (!std::isfinite(st.Rq)) return false;
    TimeField G = prob.gradient_J(V);
    double gnorm = std::sqrt(pairing_modal(G, G));
    // trust radius for the inner solve, in units of the gradient norm; grows
    // while full capped steps keep being productive, shrinks when the line
    // search has to back off
    double trust_rel = 20.0;
    bool converged = false;
    for (int nit = 0;
         nit < 200 && iter < max_iter && std::isfinite(st.Rq) && std::isfinite(gnorm);
         ++nit) {
        const double t = std::pow(st.num / st.den, 1.0 / (2.0 - pc));
        const double pp = std::pow(t, pc) * st.num;
        const double J = j_combine(pp, t * t * st.den, pc);
        const double residual = lp_norm(synthesize(G, M), p) / std::pow(st.num, 1.0 / p);
        history.push_back(
            {++iter, J, residual, std::pow(pp, 1.0 / pc), t, now_ms() - start_ms});
        if (std::getenv("BR_DEBUG"))
            std::fprintf(stderr, "nt %4d J %.10e res %.3e gnorm %.3e trust %.1e\n", iter,
                         J, residual, gnorm, trust_rel);
        if (residual < tol) {
            converged = true;
            break;
        }

        double vmax = 0.0;
        double vsq = 0.0;
        std::size_t vcount = 0;
        for (const RealField& f : st.Vsamp.frames)
            for (double x : f) {
                vmax = std::max(vmax, std::abs(x));
                vsq += x * x;
                ++vcount;
            }
        // exact curvature of the dual energy; the floor only guards against a
        // sample sitting exactly on zero
        TimeSamples dfac = st.Vsamp;
        const double floor_v = std::max(1e-14 * vmax, 1e-300);
        for (RealField& f : dfac.frames)
            for (double& x : f)
                x = (pc - 1.0) * std::pow(std::max(std::abs(x), floor_v), pc - 2.0);

        auto hess = [&](const TimeField& w) {
            TimeSamples ws = synthesize(w, M);
            for (std::size_t fi = 0; fi < ws.frames.size(); ++fi) {
                RealField& f = ws.frames[fi];
                const RealField& d = dfac.frames[fi];
                for (std::size_t i = 0; i < f.size(); ++i) f[i] *= d[i];
            }
            return add_scaled(analyze(ws, prob.sym(), prob.params().cutoff),
                              prob.big_R_apply(w), -1.0);
        };
        const double cshift =
            (pc - 1.0) * std::pow(std::sqrt(vsq / double(vcount)), pc - 2.0);
        TimeSamples pfac = dfac;
        for (RealField& f : pfac.frames)
            for (double& x : f) x = 1.0 / (x + cshift);
        auto prec = [&](const TimeField& r) {
            TimeSamples rs = synthesize(r, M);
            for (std::size_t fi = 0; fi < rs.frames.size(); ++fi) {
                RealField& f = rs.frames[fi];
                const RealField& d = pfac.frames[fi];
                for (std::size_t i = 0; i < f.size(); ++i) f[i] *= d[i];
            }
            return analyze(rs, prob.sym(), prob.params().cutoff);
        };
        double inner_res = 0.0;
        int inner_used = 0;
        bool capped = false;
        const TimeField delta = minres_solve(prob, hess, scaled(G, -1.0), 1e-8, 800,
                                             &inner_res, &inner_used, trust_rel * gnorm,
                                             &capped, prec);
        const double dnorm = std::sqrt(pairing_modal(delta, delta));

        const double gnorm_before = gnorm;
        bool accepted = false;
        double s = 1.0;
        for (int ls = 0; ls < 30; ++ls) {
            TimeField Vt = add_scaled(V, delta, s);
            QuotientState stT = quotient_eval(prob, Vt);
            if (std::isfinite(stT.Rq)) {
                TimeField Gt = prob.gradient_J(Vt);
                const double gn = std::sqrt(pairing_modal(Gt, Gt));
                if (std::isfinite(gn) && gn <= (1.0 - 1e-4 * s) * gnorm) {
                    V = std::move(Vt);
                    st = std::move(stT);
                    G = std::move(Gt);
                    gnorm = gn;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (std::getenv("BR_DEBUG"))
            std::fprintf(stderr, "      minres %d its rel %.2e |d| %.2e cap %d s %.3f\n",
                         inner_used, inner_res, dnorm, capped ? 1 : 0, s);
        if (!accepted) {
            if (trust_rel > 1.0) {
                trust_rel = std::max(1.0, 0.1 * trust_rel);
                continue;
            }
            break;
        }
        if (s == 1.0 && capped)
            trust_rel = std::min(trust_rel * 2.0, 1e7);
        else if (s < 1.0)
            trust_rel =
                std::max(1.0, 0.5 * (s * dnorm) / std::max(gnorm_before, 1e-300));
    }
    // fold the exact Nehari rescale of the final iterate back in, so the
    // identity J'(V)[V] = 0 holds to rounding in the packaged state
    if (std::isfinite(st.Rq))
        V = scaled(V, std::pow(st.num / st.den, 1.0 / (2.0 - pc)));
    return converged;
}

Solution fixed_point_core(const DualProblem& prob, const SolverConfig& cfg,
                          const std::vector<Solution>* previous, std::size_t dir_index,
                          const TimeField* warm_start) {
    cfg.validate();
    const double p = prob.params().p;
    const double pc = prob.params().p_conj();
    const int M = prob.sample_count();

    std::vector<DeflationTarget> targets;
    if (previous)
        for (const Solution& sol : *previous) {
            DeflationTarget t{sol.V, prob.big_R_apply(sol.V)};
            t.pairing = pairing_modal(t.band, t.big_R);
            if (!(t.pairing > 0.0)) throw Error("previous solution is not in the positive cone");
            targets.push_back(std::move(t));
        }

    std::string last_failure;
    for (int attempt = 0; attempt < cfg.reseed_limit; ++attempt) {
        Rng rng(cfg.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(attempt));
        TimeField guess = prob.make_field();
        try {
            if (warm_start && attempt == 0)
                guess = *warm_start;
            else
                guess = initial_guess(prob, cfg, dir_index, rng);
            guess = nehari_rescale(prob, guess).V;
        } catch (const Error& err) {
            last_failure = err.what();
            continue;
        }

        // The undamped map V <- dualinv(R V) has linearised gain 2t|W| m(xi),
        // which blows past 1 whenever a lattice mode sits close to a resonant
        // sphere, so the fixed point is located by descending the scale
        // invariant quotient Rq instead; its den->0+ barrier keeps iterates
        // inside the positive cone.
        const double ea = 2.0 / (2.0 - pc);
        const double eb = pc / (2.0 - pc);
        auto eval = [&](const TimeField& X) { return quotient_eval(prob, X); };
        auto deflate = [&](TimeField& X) {
            for (const DeflationTarget& t : targets) {
                const double c = cfg.deflation_damping * pairing_modal(X, t.big_R) / t.pairing;
                if (c != 0.0) X = add_scaled(X, t.band, -c);
            }
        };

        // Constrain to the <., R.>-complement of earlier solutions until the
        // iterate has settled into a fresh basin, then release the projection
        // so the final residual is measured against the unmodified equation.
        bool deflating = !targets.empty();
        const double newton_switch = std::max(5e-2, 10.0 * cfg.tol);

        TimeField V = guess;
        if (deflating) deflate(V);
        {
            const double nv = l2_norm(V);
            if (!(nv > 0.0)) {
                last_failure = "not in the positive cone; reseed initial guess";
                continue;
            }
            V = scaled(V, 1.0 / nv);
        }
        QuotientState st = eval(V);
        if (!std::isfinite(st.Rq)) {
            last_failure = "not in the positive cone; reseed initial guess";
            continue;
        }

        std::vector<IterationRecord> history;
        bool converged = false;
        double t = 1.0;
        TimeField V_prev = prob.make_field();
        TimeField g_prev = prob.make_field();
        bool have_prev = false;
        double eta_fallback = cfg.initial_step;
        std::vector<double> recent_rq;
        const double start_ms = now_ms();

        for (int iter = 1; iter <= cfg.max_iter; ++iter) {
            const TimeField gnum =
                analyze(prob.duality_forward(st.Vsamp), prob.sym(), prob.params().cutoff);
            TimeField g = add_scaled(scaled(gnum, st.Rq * ea * pc / st.num), st.W,
                                     -2.0 * st.Rq * eb / st.den);
            if (deflating) deflate(g);
            const double g2 = pairing_modal(g, g);

            // diagnostics at the Nehari rescale t V of the current iterate;
            // the residual is J'(t V) within the truncated mode band
            t = std::pow(st.num / st.den, 1.0 / (2.0 - pc));
            const double pp = std::pow(t, pc) * st.num;  // integral of |tV|^{p'}
            const double J = j_combine(pp, t * t * st.den, pc);
            const TimeField G = add_scaled(scaled(gnum, std::pow(t, pc - 1.0)), st.W, -t);
            const double residual =
                lp_norm(synthesize(G, M), p) / std::pow(pp, 1.0 / p);
            history.push_back({iter, J, residual, std::pow(pp, 1.0 / pc), t,
                               now_ms() - start_ms});
            if (!std::isfinite(residual) || !(g2 > 0.0) || !std::isfinite(g2)) break;
            if (!deflating && residual < cfg.tol) {
                converged = true;
                break;
            }
            if (deflating && (residual < newton_switch || iter > cfg.max_iter / 2)) {
                deflating = false;
                have_prev = false;
                recent_rq.clear();
            }
            // hand the polishing over to the Newton phase once inside the basin
            if (!deflating && residual < newton_switch) break;

            // Barzilai-Borwein step with a nonmonotone Armijo safeguard
            double eta = eta_fallback;
            if (have_prev) {
                const TimeField s = add_scaled(V, V_prev, -1.0);
                const TimeField y = add_scaled(g, g_prev, -1.0);
                const double sy = pairing_modal(s, y);
                const double ss = pairing_modal(s, s);
                if (sy > 0.0 && ss > 0.0) eta = std::clamp(ss / sy, 1e-12, 1e12);
            } else {
                eta = cfg.initial_step / std::sqrt(g2);
            }
            eta *= cfg.mixing;

            recent_rq.push_back(st.Rq);
            if (recent_rq.size() > 8) recent_rq.erase(recent_rq.begin());
            const double ref = *std::max_element(recent_rq.begin(), recent_rq.end());

            bool accepted = false;
            int bt_used = 0;
            for (int bt = 0; bt < 40; ++bt) {
                bt_used = bt;
                TimeField trial = add_scaled(V, g, -eta);
                if (deflating) deflate(trial);
                const double nv = l2_norm(trial);
                if (nv > 0.0) {
                    trial = scaled(trial, 1.0 / nv);
                    QuotientState stT = eval(trial);
                    if (stT.Rq <= ref - cfg.armijo_c * eta * g2) {
                        V_prev = std::move(V);
                        g_prev = std::move(g);
                        have_prev = true;
                        V = std::move(trial);
                        st = std::move(stT);
                        eta_fallback = eta;
                        accepted = true;
                        break;
                    }
                }
                eta *= cfg.backtrack;
            }
            if (std::getenv("BR_DEBUG") && (iter < 20 || iter % 25 == 0))
                std::fprintf(stderr, "it %4d Rq %.8e g2 %.3e eta %.3e bt %d res %.3e\n", iter,
                             st.Rq, g2, eta, bt_used, residual);
            if (!accepted) break;
        }

        // phase 2: the quotient descent above is globally safe but first
        // order; the Newton polish supplies the terminal convergence down to
        // solver tolerance. Switch to critical-point coordinates (fold t in)
        // before handing over.
        if (!converged && !history.empty() && history.back().residual < 1.0) {
            int iter = history.back().iter;
            V = scaled(V, t);
            t = 1.0;
            converged =
                newton_polish(prob, V, cfg.tol, cfg.max_iter, iter, history, start_ms);
        }

        return package_solution(prob, scaled(V, t), cfg.tol, std::move(history), converged);
    }
    throw Error(last_failure.empty() ? "not in the positive cone; reseed initial guess"
                                     : last_failure);
}

}  // namespace

Solution iterate_fixed_point(const DualProblem& prob, const SolverConfig& config,
                             const TimeField* warm_start) {
    return fixed_point_core(prob, config, nullptr, 0, warm_start);
}

Solution mountain_pass_descent(const DualProblem& prob, const SolverConfig& config, double C_R) {
    config.validate();
    const double p = prob.params().p;
    const double pc = prob.params().p_conj();

    MPGBasis basis = build_mpg_basis(prob, 1);
    const std::vector<double> radii = mpg_radii(prob, basis, C_R, config.seed);
    TimeField D = mpg_direction(prob, basis, 0);
    const RayProfile prof = ray_profile(prob, D);
    const double norm_D = std::pow(prof.a * pc, 1.0 / pc);
    const double beta_star = path_maximum(prof, 1.1 * radii[0] / norm_D);

    TimeField V = scaled(D, beta_star);
    double J = prob.functional_J(V);
    double step = config.initial_step;
    double nehari_t = 1.0;

    std::vector<IterationRecord> history;
    bool converged = false;
    int stalled = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    const double newton_switch = std::max(5e-2, 10.0 * config.tol);
    const double start_ms = now_ms();

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        const TimeField G = prob.gradient_J(V);
        const double pp = lp_power_integral(synthesize(V, prob.sample_count()), pc);
        const double residual =
            lp_norm(synthesize(G, prob.sample_count()), p) / std::pow(pp, 1.0 / p);
        history.push_back(
            {iter, J, residual, std::pow(pp, 1.0 / pc), nehari_t, now_ms() - start_ms});
        if (residual < config.tol) {
            converged = true;
            break;
        }
        // J-monotone descent is first order; once inside the basin hand the
        // iterate (already Nehari-normalised) to the Newton polish
        if (residual < newton_switch) break;
        if (residual < 0.999 * best_residual) {
            best_residual = residual;
            stalled = 0;
        } else if (++stalled > 100) {
            break;
        }

        const double g2 = pairing_modal(G, G);
        bool accepted = false;
        double s = step;
        for (int bt = 0; bt < 48; ++bt) {
            TimeField trial = add_scaled(V, G, -s);
            try {
                NehariRescale res = nehari_rescale(prob, trial);
                const double Jt = prob.functional_J(res.V);
                if (Jt <= J - config.armijo_c * s * g2) {
                    V = res.V;
                    J = Jt;
                    nehari_t = res.t;
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
                // step left the positive cone; shorten it
            }
            s *= config.backtrack;
        }
        if (!accepted) break;
        step = std::min(s / config.backtrack, 1e3);
    }

    if (!converged && !history.empty() && history.back().residual < 1.0) {
        int iter = history.back().iter;
        converged =
            newton_polish(prob, V, config.tol, config.max_iter, iter, history, start_ms);
    }

    return package_solution(prob, V, config.tol, std::move(history), converged);
}

Solution deflate_and_continue(const std::vector<Solution>& previous, const DualProblem& prob,
                              const SolverConfig& config) {
    if (previous.empty()) return iterate_fixed_point(prob, config);

    std::optional<Solution> best;
    for (std::size_t shift = 0; shift < 3; ++shift) {
        const std::size_t dir_index = previous.size() + shift;
        std::optional<Solution> attempt;
        try {
            attempt = fixed_point_core(prob, config, &previous, dir_index, nullptr);
        } catch (const Error&) {
            // direction pool exhausted (narrow band) or every reseed left the
            // cone; move on to the next shift instead of aborting the run
            continue;
        }
        Solution sol = std::move(*attempt);
        double min_angle = std::numeric_limits<double>::infinity();
        for (const Solution& prev : previous)
            min_angle = std::min(min_angle, solution_angle(prob, sol.V, prev.V));
        sol.distinct = min_angle > config.deflation_angle;
        if (sol.converged && sol.distinct) return sol;
        if (!best || sol.residual < best->residual) best = std::move(sol);
    }
    if (!best) throw Error("deflation found no candidate in the accessible directions");
    best->converged = false;
    return std::move(*best);
}

}  // namespace breather
