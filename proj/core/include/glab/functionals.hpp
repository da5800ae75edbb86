#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glab/spin.hpp"
#include "glab/statespace.hpp"

namespace glab {

enum class FunctionalClass : uint8_t { None, PseudoGradient, WeaklyVanishing, PseudoGradientFactor };

// Local functional of the spin field: a lookup table over the 2^w patterns of
// a contiguous window of w sites. Window site i corresponds to lattice label
// base + i; evaluation at x translates the window by x.
struct LocalFunctional {
    std::string name;
    int base = 0;
    int width = 0;
    std::vector<double> table;  // size 2^width, index bit i set <=> spin +1 at base+i
    FunctionalClass classification = FunctionalClass::None;

    double sup_norm() const;
    // Value at pattern bits (bit i <=> particle at window slot i).
    double at_bits(uint32_t bits) const { return table[bits]; }
    // Evaluate on a configuration, window translated by x (field value g_{T,x}).
    double eval(const SpinConfig& config, int x) const;
    bool supports_disjoint(const LocalFunctional& other, int shift_self, int shift_other) const;
};

// Table built from a callback on window spins.
LocalFunctional make_functional(const std::string& name, int base, int width,
                                const std::function<double(const int8_t*)>& fn);

// eta_{a} (single spin), eta_a*eta_b products, and differences thereof.
LocalFunctional spin_at(int a);
LocalFunctional spin_pair(int a, int b);
LocalFunctional subtract(const LocalFunctional& f, const LocalFunctional& g, const std::string& name);
LocalFunctional scale(const LocalFunctional& f, double c);

// True iff every canonical mean over the minimal covering interval vanishes
// (<= 1e-12); projections of canonical ensembles onto sub-blocks are convex
// combinations of canonical ensembles, so the minimal interval suffices.
bool is_pseudo_gradient(const LocalFunctional& g);

// True iff (grand-canonical rho=0 mean vanishes and the table is bounded by
// the declared bound) or the sup norm is at most scale^{-beta}.
bool is_weakly_vanishing(const LocalFunctional& w, int scale, double bound = 1.0 + 1e-12,
                         double beta = 0.5);

// Built-in pseudo-gradient library (all verified by is_pseudo_gradient).
std::vector<LocalFunctional> builtin_pseudo_gradients();

// Spatial averaging operator: mean of the J translates tau_{-3 l m} g,
// l = 1..J, evaluated at x (disjoint supports when width <= 3m).
double spatial_average(const LocalFunctional& g, const SpinConfig& config, int x, int count_j,
                       int max_range);

// Large-deviations cutoff: value if |value| <= N^{-beta_x/2 + eps_x1/2} else 0
// (closed inequality keeps the boundary).
double cutoff_spatial(double value, int scale, double beta_x, double eps_x1);

}  // namespace glab
