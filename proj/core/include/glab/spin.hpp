#pragma once

#include <cstdint>
#include <vector>

#include "glab/model.hpp"
#include "glab/rng.hpp"

namespace glab {

// Spin field eta in {-1,+1}^I, +1 = particle. Sites are addressed by internal
// index 0..size-1; segment labels map via Geometry::origin().
struct SpinConfig {
    Geometry geometry;
    std::vector<int8_t> spins;

    int size() const { return static_cast<int>(spins.size()); }
    int wrap(int idx) const {
        const int L = size();
        idx %= L;
        return idx < 0 ? idx + L : idx;
    }
    // Index of the site carrying label `label` (identity on a torus mod L).
    int index_of_label(int label) const { return wrap(label + geometry.origin()); }
    int label_of_index(int idx) const { return idx - geometry.origin(); }

    int8_t at_label(int label) const { return spins[index_of_label(label)]; }
    bool in_segment(int label) const {
        if (geometry.is_torus()) return true;
        const int r = geometry.origin();
        return label >= -r && label <= r;
    }
    int total_spin() const {
        int s = 0;
        for (int8_t v : spins) s += v;
        return s;
    }
};

SpinConfig make_all(const Geometry& g, int8_t value);
// Deterministic flat profile: alternating particle/hole, eta at label x equals +1 iff x odd.
SpinConfig make_flat(const Geometry& g);
// Step profile eta_y = 1[y>0] - 1[y<=0].
SpinConfig make_narrow_wedge(const Geometry& g);
// Product Bernoulli with mean spin rho.
SpinConfig make_bernoulli(const Geometry& g, double rho, Rng& rng);
// Single particle at the given label, holes elsewhere.
SpinConfig make_single_particle(const Geometry& g, int label);

// Rate of the swap channel (x, x+k) with x, x+k given as site labels.
// Throws on a segment if either endpoint leaves the lattice.
double jump_rate(const SpinConfig& config, int x_label, int k, const ModelParams& params);

}  // namespace glab
