#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "glab/functionals.hpp"
#include "glab/model.hpp"
#include "glab/statespace.hpp"

namespace glab {

// Canonical (uniform on a spin hyperplane) or grand-canonical (product
// Bernoulli) ensemble on a block of n sites, with enumerated support.
struct EnsembleSpec {
    enum class Kind { Canonical, Grand };
    Kind kind = Kind::Canonical;
    int sites = 0;
    double rho = 0.0;
    StateSpace space;
    Eigen::VectorXd weights;

    double mean(const Eigen::VectorXd& f) const { return weights.dot(f); }
};

EnsembleSpec canonical_ensemble(int sites, int particles);
// Throws when rho*n has the wrong parity.
EnsembleSpec canonical_ensemble_rho(int sites, double rho);
EnsembleSpec grand_ensemble(int sites, double rho);

// All configurations of the hyperplane with mean spin rho.
std::vector<uint32_t> enumerate_hyperplane(int sites, double rho);

// Functional evaluated on every enumerated state; the window is placed with
// its base at local site (shift + base).
Eigen::VectorXd evaluate_on_space(const LocalFunctional& f, const StateSpace& space, int shift = 0);

// E[f log f] with 0 log 0 = 0; requires f >= 0.
double relative_entropy(const Eigen::VectorXd& density, const EnsembleSpec& ensemble);

// (1/2) sum_{x<y} alpha_{y-x} E[(sqrt f (eta^{xy}) - sqrt f (eta))^2], exact.
double dirichlet_form(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                      const std::vector<double>& alpha);

// H(f) / (|I|^2 D(f)); 0/0 guarded to 0.
double lsi_ratio(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                 const std::vector<double>& alpha);

struct GapTable {
    std::vector<int> sizes;
    std::vector<double> gaps;         // second-smallest eigenvalue of -S_bar, unscaled
    std::vector<double> gaps_scaled;  // gap * |I|^2
};

// Half-filled canonical hyperplanes over a size range.
GapTable spectral_gap(int size_lo, int size_hi, const std::vector<double>& alpha);

struct HMinusOneResult {
    double value = 0.0;
    double variational_lower_bound = 0.0;
    bool mean_zero = true;  // +inf value flagged here when violated
};

// ||phi||_{-1}^2 = sup_psi (2 E[phi psi] + E[psi Sbar psi]) via the
// pseudo-inverse of -Sbar on the complement of constants; the lower bound
// maximizes the same objective over a random subspace.
HMinusOneResult h_minus_one_norm(const Eigen::VectorXd& phi, const EnsembleSpec& ensemble,
                                 const GeneratorMatrix& sbar, int random_witnesses = 64,
                                 uint64_t seed = 7);

// E|A^T_tau phi|^2 at a stationary start, evaluated by eigendecomposition of
// the full generator and closed-form s-integrals. Reusable across (phi, tau).
class KvSolver {
  public:
    KvSolver(const GeneratorMatrix& generator, const EnsembleSpec& ensemble);
    double lhs(const Eigen::VectorXd& phi, double tau) const;

  private:
    Eigen::MatrixXcd v_, v_inv_;
    Eigen::VectorXcd lambda_;
    Eigen::VectorXd mu_;
};

double kv_lhs_exact(const Eigen::VectorXd& phi, double tau, const GeneratorMatrix& generator,
                    const EnsembleSpec& ensemble);

struct DisjointAverageReport {
    int count_j = 0;
    double avg_norm = 0.0;        // sup_rho ||avg phi_j||^2_{-1}
    double bound = 0.0;           // J^{-1} avg_j sup_rho ||phi_j||^2_{-1}
    double ratio = 0.0;
    double worst_support_ratio = 0.0;  // ||phi_j||^2 vs |I_j|^2 sup E phi_j^2 (unscaled)
    double pgf_ratio = 0.0;            // ||g f||_{-1} / ||g||_{-1}, f a spin product
};

DisjointAverageReport disjoint_average_bound_check(const LocalFunctional& g,
                                                   const std::vector<int>& shifts, int sites,
                                                   const std::vector<double>& alpha);

struct AzumaReport {
    struct Row {
        double c = 0.0;
        double tail = 0.0;
        double bound = 0.0;
    };
    std::vector<Row> rows;
    double sup_bound = 0.0;  // B
    int count_j = 0;
    bool all_within = false;
};

// Exact tails P[|J^{-1} sum phi_j| >= C] under the canonical ensemble against
// 2 exp(-J C^2 / (2 B^2)).
AzumaReport azuma_tail_check(const LocalFunctional& g, const std::vector<int>& shifts, int sites,
                             double rho, const std::vector<double>& c_grid);

struct EntropyProductionCurve {
    std::vector<double> times;
    std::vector<double> dirichlet;  // D(f_s^{I'}), grand-canonical, unscaled rates
    double integral = 0.0;
};

// Exact law evolution on a torus of params.geometry.size <= 10 sites from
// density f0 (w.r.t. the rho=0 product measure), projected on the sub-block
// [block_lo, block_lo + block_width), trapezoid integral refined to `tol`.
EntropyProductionCurve entropy_production_trajectory(const ModelParams& params,
                                                     const Eigen::VectorXd& f0, double T,
                                                     int block_lo, int block_width,
                                                     double tol = 1e-6);

// Conditional-expectation projection of a density onto a sub-block.
Eigen::VectorXd project_density(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                                int block_lo, int block_width);

}  // namespace glab
