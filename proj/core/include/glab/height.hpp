#pragma once

#include <string>
#include <vector>

#include "glab/model.hpp"
#include "glab/simulate.hpp"
#include "glab/spin.hpp"

namespace glab {

// Height surface h_x indexed by site label. h at label 0 is 2 N^{-1/2} times
// the net leftward flux across the marked edge (0,1); the rest follows from
// the increment identity h_x - h_{x-1} = N^{-1/2} eta_x. A jump over k edges
// moves the k passed columns by -2N^{-1/2} (rightward) or +2N^{-1/2}.
struct HeightField {
    int scale = 1;
    Geometry geometry;
    std::vector<double> values;  // index 0 <-> smallest label

    int index_of_label(int label) const {
        const int L = static_cast<int>(values.size());
        int idx = label + geometry.origin();
        if (geometry.is_torus()) {
            idx %= L;
            if (idx < 0) idx += L;
        }
        return idx;
    }
    double at_label(int label) const { return values[index_of_label(label)]; }
    double h0() const { return at_label(0); }
};

HeightField init_height(const SpinConfig& config, int scale);

// Incremental update from one executed jump event.
void update_height(HeightField& h, const JumpEvent& ev);

// Largest violation of the increment identity against the given configuration.
double increment_identity_error(const HeightField& h, const SpinConfig& config);

// Microscopic Cole-Hopf transform Z_x = exp(-lambda h_x + vN T), kept in the
// log domain so the field stays positive even when |lambda h| is large.
struct GartnerField {
    double lambda = 0.0;
    double vN = 0.0;
    double time = 0.0;
    std::vector<double> log_values;

    double log_at(int i) const { return log_values[i]; }
    double value(int i) const { return std::exp(log_values[i]); }
    std::vector<double> values() const;
};

GartnerField gartner(const HeightField& h, double lambda, double vN, double time);

// Narrow-wedge normalization (1/2) lambda^{-1} N^{1/2} Z.
GartnerField narrow_wedge_rescale(const GartnerField& z, int scale);

// Exact stationary drift compensation: vN = -E^{mu_0}[ Z_x^{-1} (S Z)_x ],
// enumerated over the spin window whose jumps can move h across the marked
// edge. Requires torus geometry (site-independence by translation invariance).
double calibrate_vN(const ModelParams& params, const DerivedConstants& constants);

// Snapshot export: CSV rows (x, eta, h, Z).
void write_field_csv(const std::string& path, const SpinConfig& config, const HeightField& h,
                     const GartnerField& z);

// field.csv plus manifest.json (N, lambda, vN, T, seed) under `dir`.
void write_field_snapshot(const std::string& dir, const SpinConfig& config, const HeightField& h,
                          const GartnerField& z, uint64_t seed);

}  // namespace glab
