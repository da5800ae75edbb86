#include "glab/she.hpp"

#include <cmath>
#include <stdexcept>

namespace glab {

SheGrid make_she_grid(double length, double dx, double alpha, double lambda, double dt_safety) {
    if (length <= 0 || dx <= 0 || alpha <= 0) throw std::invalid_argument("make_she_grid: bad grid");
    SheGrid g;
    g.dx = dx;
    g.length = length;
    g.alpha = alpha;
    g.lambda = lambda;
    g.dt = dt_safety * dx * dx / (2.0 * alpha);
    const int cells = static_cast<int>(std::round(length / dx));
    if (cells < 4 || std::abs(cells * dx - length) > 1e-9 * length)
        throw std::invalid_argument("make_she_grid: dx must divide the torus length");
    g.z.assign(cells, 1.0);
    return g;
}

void narrow_wedge_init(SheGrid& grid) {
    std::fill(grid.z.begin(), grid.z.end(), 0.0);
    grid.z[grid.origin_cell()] = 1.0 / grid.dx;
}

void she_step(SheGrid& grid, Rng& rng) {
    if (!grid.stable()) throw std::runtime_error("she_step: stability condition violated");
    const int n = grid.cells();
    const double diffuse = grid.dt * 0.5 * grid.alpha / (grid.dx * grid.dx);
    const double noise = grid.lambda * std::sqrt(grid.alpha) * std::sqrt(grid.dt / grid.dx);
    std::normal_distribution<double> gauss;
    static thread_local std::vector<double> next;
    next.resize(n);
    for (int i = 0; i < n; ++i) {
        const double zl = grid.z[i == 0 ? n - 1 : i - 1];
        const double zr = grid.z[i == n - 1 ? 0 : i + 1];
        double v = grid.z[i] + diffuse * (zl + zr - 2.0 * grid.z[i]);
        if (noise != 0.0) v += noise * grid.z[i] * gauss(rng);
        if (v <= 0.0) {
            v = 1e-300;
            ++grid.clamp_events;
        }
        next[i] = v;
    }
    grid.z.swap(next);
    grid.time += grid.dt;
}

void she_run(SheGrid& grid, double T, Rng& rng) {
    // Land exactly on T; rounding up can only shrink dt, preserving stability.
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(T / grid.dt - 1e-9)));
    grid.dt = T / steps;
    if (!grid.stable()) throw std::runtime_error("she_run: stability condition violated");
    for (long s = 0; s < steps; ++s) she_step(grid, rng);
}

std::vector<std::vector<double>> she_solve(const SheGrid& grid0, double T, int replicas,
                                           uint64_t seed, long* total_clamps) {
    std::vector<std::vector<double>> fields(replicas);
    long clamps = 0;
    for (int r = 0; r < replicas; ++r) {
        SheGrid g = grid0;
        Rng rng = make_rng(seed, static_cast<uint64_t>(r));
        she_run(g, T, rng);
        clamps += g.clamp_events;
        fields[r] = std::move(g.z);
    }
    if (total_clamps) *total_clamps = clamps;
    return fields;
}

std::vector<double> kpz_height(const SheGrid& grid) {
    if (grid.lambda == 0.0) throw std::invalid_argument("kpz_height: lambda = 0");
    std::vector<double> h(grid.z.size());
    for (size_t i = 0; i < h.size(); ++i) {
        if (!(grid.z[i] > 0.0)) throw std::domain_error("kpz_height: nonpositive field");
        h[i] = -std::log(grid.z[i]) / grid.lambda;
    }
    return h;
}

}  // namespace glab
