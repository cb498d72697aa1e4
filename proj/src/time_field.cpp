#include "breather/time_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace breather {

namespace {

// e^(2 pi i k m / M) with the angle reduced exactly before evaluation.
std::complex<double> unit_phasor(long long km, int samples) {
    long long r = km % samples;
    if (r < 0) r += samples;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / samples;
    return {std::cos(angle), std::sin(angle)};
}

void require_compatible(const TimeField& a, const TimeField& b) {
    if (!(a.grid() == b.grid()) || a.symmetry() != b.symmetry() || a.cutoff() != b.cutoff() ||
        a.period() != b.period())
        throw Error("time fields have mismatched grid, symmetry, cutoff or period");
}

}  // namespace

TimeField::TimeField(SpaceGrid grid, SymmetryClass sym, int cutoff, double period)
    : grid_(grid), sym_(sym), cutoff_(cutoff), period_(period) {
    grid_.validate();
    if (cutoff_ < 0) throw ConfigError("mode cutoff must be nonnegative");
    if (period_ <= 0.0) throw ConfigError("period must be positive");
    ks_ = nonneg_mode_set(sym_, cutoff_);
    modes_.assign(ks_.size(), ComplexField(grid_.size()));
}

double TimeField::omega(int k) const {
    return 2.0 * std::numbers::pi * k / period_;
}

bool TimeField::has_mode(int k) const {
    return std::find(ks_.begin(), ks_.end(), k) != ks_.end();
}

ComplexField& TimeField::mode(int k) {
    for (std::size_t i = 0; i < ks_.size(); ++i)
        if (ks_[i] == k) return modes_[i];
    throw Error("mode " + std::to_string(k) + " is not stored in this time field");
}

const ComplexField& TimeField::mode(int k) const {
    return const_cast<TimeField*>(this)->mode(k);
}

int default_sample_count(int cutoff) {
    return std::max(64, 8 * (cutoff + 1));
}

TimeSamples synthesize(const TimeField& field, int sample_count) {
    if (sample_count < 2 * field.cutoff() + 2)
        throw Error("sample count " + std::to_string(sample_count) + " too small for cutoff " +
                    std::to_string(field.cutoff()) + "; band would alias");
    const std::size_t size = field.grid().size();
    TimeSamples out{field.grid(), field.period(), {}};
    out.frames.assign(sample_count, RealField(size, 0.0));
    for (int m = 0; m < sample_count; ++m) {
        RealField& frame = out.frames[m];
        for (int k : field.mode_indices()) {
            const ComplexField& v = field.mode(k);
            if (k == 0) {
                for (std::size_t i = 0; i < size; ++i) frame[i] += v[i].real();
            } else {
                const std::complex<double> ph = unit_phasor(static_cast<long long>(k) * m, sample_count);
                const double c = 2.0 * ph.real(), s = 2.0 * ph.imag();
                for (std::size_t i = 0; i < size; ++i)
                    frame[i] += c * v[i].real() - s * v[i].imag();
            }
        }
    }
    return out;
}

std::vector<RealField> synthesize_at(const TimeField& field, const std::vector<double>& times) {
    const std::size_t size = field.grid().size();
    std::vector<RealField> out(times.size(), RealField(size, 0.0));
    for (std::size_t m = 0; m < times.size(); ++m) {
        RealField& frame = out[m];
        for (int k : field.mode_indices()) {
            const ComplexField& v = field.mode(k);
            if (k == 0) {
                for (std::size_t i = 0; i < size; ++i) frame[i] += v[i].real();
            } else {
                const double angle = field.omega(k) * times[m];
                const double c = 2.0 * std::cos(angle), s = 2.0 * std::sin(angle);
                for (std::size_t i = 0; i < size; ++i)
                    frame[i] += c * v[i].real() - s * v[i].imag();
            }
        }
    }
    return out;
}

TimeField analyze(const TimeSamples& samples, SymmetryClass sym, int cutoff) {
    const int count = samples.count();
    if (count < 2 * cutoff + 2)
        throw Error("sample count " + std::to_string(count) + " too small for cutoff " +
                    std::to_string(cutoff) + "; band would alias");
    TimeField raw(samples.grid, SymmetryClass(1), cutoff, samples.period);
    const std::size_t size = samples.grid.size();
    const double scale = 1.0 / count;
    for (int k : raw.mode_indices()) {
        ComplexField& v = raw.mode(k);
        for (int m = 0; m < count; ++m) {
            // conj phasor: e^(-2 pi i k m / M)
            const std::complex<double> ph = unit_phasor(-static_cast<long long>(k) * m, count);
            const double c = ph.real() * scale, s = ph.imag() * scale;
            const RealField& frame = samples.frames[m];
            for (std::size_t i = 0; i < size; ++i)
                v[i] += std::complex<double>(c * frame[i], s * frame[i]);
        }
    }
    return project_symmetry(raw, sym);
}

TimeField project_symmetry(const TimeField& field, SymmetryClass sym) {
    TimeField out(field.grid(), sym, field.cutoff(), field.period());
    for (int k : out.mode_indices()) {
        if (!field.has_mode(k)) continue;
        const ComplexField& src = field.mode(k);
        ComplexField& dst = out.mode(k);
        if (sym.index == 2 || k == 0) {
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
        } else if (sym.index == 3) {
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = {0.0, src[i].imag()};
        } else {
            dst = src;
        }
    }
    return out;
}

double lp_power_integral(const TimeSamples& samples, double r) {
    // the solver evaluates this every iteration; special-case its exponents
    double s = 0.0;
    if (r == 1.5) {
        for (const RealField& frame : samples.frames)
            for (double v : frame) {
                const double a = std::abs(v);
                s += a * std::sqrt(a);
            }
    } else if (r == 2.0) {
        for (const RealField& frame : samples.frames)
            for (double v : frame) s += v * v;
    } else if (r == 3.0) {
        for (const RealField& frame : samples.frames)
            for (double v : frame) {
                const double a = std::abs(v);
                s += a * a * a;
            }
    } else {
        for (const RealField& frame : samples.frames)
            for (double v : frame) s += std::pow(std::abs(v), r);
    }
    return s * samples.quad_weight();
}

double lp_norm(const TimeSamples& samples, double r) {
    return std::pow(lp_power_integral(samples, r), 1.0 / r);
}

double mixed_norm(const TimeSamples& samples, double q, double p) {
    if (q <= 0.0 || p <= 0.0) throw Error("mixed_norm: exponents must be positive");
    const std::size_t size = samples.grid.size();
    std::vector<double> inner_pow(size, 0.0);
    for (const RealField& frame : samples.frames)
        for (std::size_t i = 0; i < size; ++i) inner_pow[i] += std::pow(std::abs(frame[i]), p);
    const double tw = samples.time_weight();
    double outer = 0.0;
    for (std::size_t i = 0; i < size; ++i) outer += std::pow(inner_pow[i] * tw, q / p);
    return std::pow(outer * samples.grid.cell_volume(), 1.0 / q);
}

double mixed_norm(const TimeField& field, double q, double p) {
    return mixed_norm(synthesize(field, default_sample_count(field.cutoff())), q, p);
}

double pairing_modal(const TimeField& a, const TimeField& b) {
    require_compatible(a, b);
    const std::size_t size = a.grid().size();
    double total = 0.0;
    for (int k : a.mode_indices()) {
        const ComplexField& ak = a.mode(k);
        const ComplexField& bk = b.mode(k);
        double s = 0.0;
        if (k == 0) {
            for (std::size_t i = 0; i < size; ++i) s += ak[i].real() * bk[i].real();
        } else {
            for (std::size_t i = 0; i < size; ++i)
                s += 2.0 * (ak[i].real() * bk[i].real() + ak[i].imag() * bk[i].imag());
        }
        total += s;
    }
    return total * a.period() * a.grid().cell_volume();
}

double pairing_quad(const TimeSamples& a, const TimeSamples& b) {
    if (!(a.grid == b.grid) || a.count() != b.count() || a.period != b.period)
        throw Error("pairing_quad: sample sets are incompatible");
    double s = 0.0;
    for (int m = 0; m < a.count(); ++m) {
        const RealField& fa = a.frames[m];
        const RealField& fb = b.frames[m];
        for (std::size_t i = 0; i < fa.size(); ++i) s += fa[i] * fb[i];
    }
    return s * a.quad_weight();
}

double l2_norm(const TimeField& field) {
    const std::size_t size = field.grid().size();
    double total = 0.0;
    for (int k : field.mode_indices()) {
        const ComplexField& v = field.mode(k);
        double s = 0.0;
        if (k == 0) {
            for (std::size_t i = 0; i < size; ++i) s += v[i].real() * v[i].real();
        } else {
            for (std::size_t i = 0; i < size; ++i) s += 2.0 * std::norm(v[i]);
        }
        total += s;
    }
    return std::sqrt(total * field.period() * field.grid().cell_volume());
}

std::vector<std::pair<int, double>> mode_energies(const TimeField& field, double r) {
    std::vector<std::pair<int, double>> out;
    for (int k : field.mode_indices()) out.emplace_back(k, norm_lr(field.grid(), field.mode(k), r));
    return out;
}

TimeField scaled(const TimeField& field, double factor) {
    TimeField out = field;
    for (int k : out.mode_indices())
        for (auto& v : out.mode(k)) v *= factor;
    return out;
}

TimeField add_scaled(const TimeField& a, const TimeField& b, double factor) {
    require_compatible(a, b);
    TimeField out = a;
    for (int k : out.mode_indices()) {
        ComplexField& dst = out.mode(k);
        const ComplexField& src = b.mode(k);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
    }
    return out;
}

TimeSamples scaled(const TimeSamples& samples, double factor) {
    TimeSamples out = samples;
    for (RealField& frame : out.frames)
        for (double& v : frame) v *= factor;
    return out;
}

TimeSamples add_scaled(const TimeSamples& a, const TimeSamples& b, double factor) {
    if (!(a.grid == b.grid) || a.count() != b.count()) throw Error("add_scaled: incompatible samples");
    TimeSamples out = a;
    for (int m = 0; m < out.count(); ++m)
        for (std::size_t i = 0; i < out.frames[m].size(); ++i) out.frames[m][i] += factor * b.frames[m][i];
    return out;
}

}  // namespace breather
