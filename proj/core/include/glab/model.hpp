#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glab {

// Lattice geometry. A segment has sites labeled -radius..radius and no bonds
// leaving it; a torus has sites 0..size-1 with periodic addition.
struct Geometry {
    enum class Kind { Segment, Torus };
    Kind kind = Kind::Torus;
    int size = 0;  // total site count (segment: 2*radius+1)

    static Geometry segment(int radius) { return {Kind::Segment, 2 * radius + 1}; }
    static Geometry torus(int size) { return {Kind::Torus, size}; }

    bool is_torus() const { return kind == Kind::Torus; }
    // Segment sites carry labels -radius..radius; internal indices are 0..size-1.
    int origin() const { return is_torus() ? 0 : (size - 1) / 2; }
};

// Jump coefficients and scale of the weakly asymmetric long-range exclusion
// process. alpha[k-1] is the symmetric weight of range k, gamma[k-1] the
// asymmetry; rates are N^2 alpha_k (1 - N^{-1/2} gamma_k 1[hole at x]1[particle at x+k]).
struct ModelParams {
    int scale = 1;                 // N
    std::vector<double> alpha;     // alpha_1..alpha_m, nonnegative, sums to 1, alpha_1 > 0
    std::vector<double> gamma;     // gamma_1..gamma_m
    Geometry geometry = Geometry::torus(16);
    double assumption2_constant = 1.0;  // c in the deviation threshold c*N^{-1/2}

    int max_range() const { return static_cast<int>(alpha.size()); }
};

struct DerivedConstants {
    double alpha_bar = 0.0;    // sum k^2 alpha_k
    double alpha_prime = 0.0;  // sum k alpha_k gamma_k
    double lambda = 0.0;       // alpha_prime / alpha_bar
    std::vector<double> gamma_bar;
    std::vector<bool> gamma_bar_defined;  // false on channels with alpha_k = 0
};

struct AsymmetryDeviation {
    double deviation = 0.0;  // sum_k k alpha_k |gamma_k - gamma_bar_k|
    double threshold = 0.0;  // c * N^{-1/2}
    bool satisfied() const { return deviation <= threshold; }
};

struct ValidationReport {
    bool ok = false;
    bool rates_nonnegative = false;      // N^{-1/2}|gamma_k| <= 1 for all k
    bool geometry_ok = false;            // size >= 2m+1
    bool coefficients_ok = false;        // sum alpha = 1, alpha_1 > 0, alpha_k >= 0
    AsymmetryDeviation deviation;
    std::vector<std::string> messages;
};

// Constants of the specialized asymmetry: alpha_bar, alpha_prime, lambda, and
// gamma_bar solving alpha_k gamma_bar_k = 2 lambda sum_{l>=k} ((l-k)/k) alpha_l + lambda alpha_k.
DerivedConstants derive_constants(const ModelParams& params);

// |sum k alpha_k gamma_k - sum k alpha_k gamma_bar_k|; vanishes identically.
double mean_invariance_residual(const ModelParams& params);

ValidationReport validate_params(const ModelParams& params);

// Throwing variant for call sites that require a valid model.
void require_valid(const ModelParams& params);

// Coefficients gamma := gamma_bar(lambda_target), the one-parameter family on
// which the deviation vanishes for every N.
std::vector<double> specialize_gamma(const std::vector<double>& alpha, double lambda_target);

enum class Spin : int8_t { Hole = -1, Particle = 1 };

// Firing rate of the swap channel (x, x+k); spins are the current values at the
// two endpoints. Branch-free in the indicator product.
inline double jump_rate_spins(const ModelParams& p, int k, int8_t spin_x, int8_t spin_xk) {
    const double n2 = static_cast<double>(p.scale) * p.scale;
    const double suppressed = (spin_x == -1 && spin_xk == 1) ? 1.0 : 0.0;
    return n2 * p.alpha[k - 1] *
           (1.0 - suppressed * p.gamma[k - 1] / std::sqrt(static_cast<double>(p.scale)));
}

}  // namespace glab
