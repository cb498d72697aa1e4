#include "breather/field.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace breather {

void SpaceGrid::validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
    if (half_width <= 0.0) throw ConfigError("grid half-width must be positive");
    if (points < 4 || (points & (points - 1)) != 0)
        throw ConfigError("grid points per axis must be a power of two >= 4, got " + std::to_string(points));
}

double SpaceGrid::freq(int j) const {
    return std::numbers::pi / half_width * freq_index(j);
}

namespace {

struct PlanKey {
    int dim;
    int points;
    int sign;
    auto operator<=>(const PlanKey&) const = default;
};

// FFTW planning is not thread-safe; execution on distinct arrays is.
// FFTW_ESTIMATE keeps plan selection deterministic from run to run.
fftw_plan lookup_plan(const SpaceGrid& grid, int sign) {
    static std::mutex mutex;
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    PlanKey key{grid.dim, grid.points, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(grid.size());
    int n[3] = {grid.points, grid.points, grid.points};
    fftw_plan plan = fftw_plan_dft(grid.dim, n,
                                   reinterpret_cast<fftw_complex*>(scratch.data()),
                                   reinterpret_cast<fftw_complex*>(scratch.data()),
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw Error("fftw plan creation failed");
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void fft_forward(const SpaceGrid& grid, ComplexField& data) {
    if (data.size() != grid.size()) throw Error("fft_forward: field size does not match grid");
    fftw_plan plan = lookup_plan(grid, FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
}

void fft_inverse(const SpaceGrid& grid, ComplexField& data) {
    if (data.size() != grid.size()) throw Error("fft_inverse: field size does not match grid");
    fftw_plan plan = lookup_plan(grid, FFTW_BACKWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : data) v *= scale;
}

std::vector<double> frequency_squares(const SpaceGrid& grid) {
    const int n = grid.points;
    std::vector<double> axis(n);
    for (int j = 0; j < n; ++j) {
        const double f = grid.freq(j);
        axis[j] = f * f;
    }
    std::vector<double> out(grid.size());
    if (grid.dim == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1) out[idx++] = axis[j0] + axis[j1];
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = 0; j2 < n; ++j2) out[idx++] = axis[j0] + axis[j1] + axis[j2];
    }
    return out;
}

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

RealField real_part(const ComplexField& f) {
    RealField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

double inner(const SpaceGrid& grid, const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * grid.cell_volume();
}

std::complex<double> inner(const SpaceGrid& grid, const ComplexField& a, const ComplexField& b) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s * grid.cell_volume();
}

double norm_l2(const SpaceGrid& grid, const RealField& f) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s * grid.cell_volume());
}

double norm_l2(const SpaceGrid& grid, const ComplexField& f) {
    double s = 0.0;
    for (const auto& v : f) s += std::norm(v);
    return std::sqrt(s * grid.cell_volume());
}

double norm_lr(const SpaceGrid& grid, const RealField& f, double r) {
    if (r <= 0.0) throw Error("norm_lr: exponent must be positive");
    double s = 0.0;
    for (double v : f) s += std::pow(std::abs(v), r);
    return std::pow(s * grid.cell_volume(), 1.0 / r);
}

double norm_lr(const SpaceGrid& grid, const ComplexField& f, double r) {
    if (r <= 0.0) throw Error("norm_lr: exponent must be positive");
    double s = 0.0;
    for (const auto& v : f) s += std::pow(std::abs(v), r);
    return std::pow(s * grid.cell_volume(), 1.0 / r);
}

double norm_sup(const RealField& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double norm_sup(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

namespace {
std::atomic<int> g_thread_budget{1};
}

void set_thread_budget(int threads) {
    g_thread_budget.store(threads < 1 ? 1 : threads);
}

int thread_budget() { return g_thread_budget.load(); }

}  // namespace breather
