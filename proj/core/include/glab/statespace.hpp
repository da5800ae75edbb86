#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <vector>

#include "glab/model.hpp"

namespace glab {

// Enumerated spin configurations on a block of n <= 20 sites, encoded as
// bitmasks (bit i set <=> particle at local site i). The state list is either
// the full space or one canonical hyperplane.
struct StateSpace {
    int sites = 0;
    std::vector<uint32_t> states;          // sorted masks
    std::vector<int32_t> index_of_mask;    // size 2^sites, -1 if absent

    int size() const { return static_cast<int>(states.size()); }
    int index(uint32_t mask) const { return index_of_mask[mask]; }
    static int8_t spin(uint32_t mask, int site) { return (mask >> site) & 1u ? 1 : -1; }
};

StateSpace full_space(int sites);
// States with exactly `particles` bits set (the hyperplane of mean spin
// (2*particles - n)/n).
StateSpace hyperplane(int sites, int particles);
// Feasibility and particle count for a target mean spin rho on n sites.
bool hyperplane_feasible(int sites, double rho, int* particles_out = nullptr);

using SparseGen = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct GeneratorMatrix {
    SparseGen rates;        // off-diagonal jump rates, row = from-state
    bool symmetric_only = false;
    bool periodic = false;
    bool scaled = true;     // carries the N^2 speed factor

    Eigen::MatrixXd dense() const;
};

// Full dynamic on the block: every (x, x+k) channel, k = 1..m, with periodic
// addition when `periodic`, bonds leaving the block dropped otherwise.
GeneratorMatrix build_generator(const ModelParams& params, const StateSpace& space, bool periodic);

// Symmetric-only part with wrap channels removed and gamma = 0; `scaled`
// keeps or strips the N^2 speed factor.
GeneratorMatrix build_symmetric_part(const std::vector<double>& alpha, const StateSpace& space,
                                     bool scaled, int scale = 1);

// Probability row vector over an enumerated state space.
struct LawVector {
    Eigen::VectorXd p;
    double min_entry() const { return p.minCoeff(); }
    double total() const { return p.sum(); }
    bool valid(double tol = 1e-10) const {
        return min_entry() >= -tol && std::abs(total() - 1.0) <= tol;
    }
};

LawVector product_bernoulli_law(const StateSpace& space, double rho);
LawVector point_mass_law(const StateSpace& space, uint32_t mask);

// law * exp(T G), exact to ~1e-12: dense scaling-and-squaring for small
// spaces, uniformization otherwise (both routes exposed for cross-checks).
LawVector evolve_law_exact(const GeneratorMatrix& gen, const LawVector& law0, double T);
Eigen::VectorXd evolve_law_uniformized(const SparseGen& rates, const Eigen::VectorXd& row,
                                       double T, double tol = 1e-13);

// sup_state |(mu G)_state| for a row vector mu.
double stationarity_residual(const GeneratorMatrix& gen, const LawVector& mu);

}  // namespace glab
