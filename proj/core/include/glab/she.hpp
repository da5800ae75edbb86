#pragma once

#include <vector>

#include "glab/rng.hpp"

namespace glab {

// Explicit Euler-Maruyama discretization of the stochastic heat equation
// dZ = (alpha/2) Z'' dT - lambda sqrt(alpha) Z dW on a torus of macroscopic
// length `length` (sign of the noise immaterial in law). Positivity is
// maintained by a counted clamp at 1e-300; accepted runs must report zero
// clamp events.
struct SheGrid {
    double dx = 0.0;
    double dt = 0.0;
    double length = 0.0;
    double alpha = 1.0;
    double lambda = 0.0;
    std::vector<double> z;
    long clamp_events = 0;
    double time = 0.0;

    int cells() const { return static_cast<int>(z.size()); }
    int origin_cell() const { return cells() / 2; }
    // Stability: dt <= dx^2 / (2 alpha).
    bool stable() const { return dt <= dx * dx / (2.0 * alpha) + 1e-15; }
};

// Grid with dt = safety * dx^2/(2 alpha), flat data Z = 1.
SheGrid make_she_grid(double length, double dx, double alpha, double lambda,
                      double dt_safety = 0.5);

// Z = 1/dx at the origin cell, 0 elsewhere (discrete Dirac of unit mass).
void narrow_wedge_init(SheGrid& grid);

void she_step(SheGrid& grid, Rng& rng);
void she_run(SheGrid& grid, double T, Rng& rng);

// Replica ensemble of the field at time T; each replica uses stream seed ^ index.
std::vector<std::vector<double>> she_solve(const SheGrid& grid0, double T, int replicas,
                                           uint64_t seed, long* total_clamps = nullptr);

// h = -lambda^{-1} log Z.
std::vector<double> kpz_height(const SheGrid& grid);

}  // namespace glab
