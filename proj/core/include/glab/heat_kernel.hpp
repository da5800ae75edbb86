#pragma once

#include <Eigen/Dense>
#include <vector>

#include "glab/model.hpp"

namespace glab {

// Long-range discrete Laplacian (1/2) sum_k alpha_tilde_k N^2 Delta_k on a
// torus of `length` sites, and its heat kernel. The generator is circulant,
// so kernel rows come from discrete Fourier diagonalization.
struct KernelSpec {
    int length = 0;
    int scale = 1;
    std::vector<double> alpha_tilde;

    double alpha_bar() const {
        double a = 0.0;
        for (size_t k = 1; k <= alpha_tilde.size(); ++k)
            a += static_cast<double>(k) * k * alpha_tilde[k - 1];
        return a;
    }
    // Fourier multipliers mu_j = N^2 sum_k alpha_tilde_k (cos(2 pi j k / L) - 1).
    std::vector<double> eigenvalues() const;
};

inline KernelSpec kernel_spec_of(const ModelParams& p) {
    return KernelSpec{p.geometry.size, p.scale, p.alpha};
}

std::vector<double> laplacian_apply(const KernelSpec& spec, const std::vector<double>& phi);

// Row y -> P_{s,t,x,y}; exact spectral evaluation.
std::vector<double> kernel_row(const KernelSpec& spec, double s, double t, int x);

// sum_y P_{0,t,x,y} phi_y for all x (one circular convolution).
std::vector<double> heat_operator_space(const KernelSpec& spec, double t,
                                        const std::vector<double>& phi0);

// Duhamel integral int_0^t sum_y P_{s,t,x,y} F_{s,y} ds for F piecewise
// constant in s: F = fields[i] on [breaks[i], breaks[i+1]), breaks.back() = t.
// Mode-wise closed-form integration makes the quadrature exact.
std::vector<double> heat_operator_spacetime(const KernelSpec& spec,
                                            const std::vector<double>& breaks,
                                            const std::vector<std::vector<double>>& fields);

// grad_k^! phi_x = N (phi_{x+k} - phi_x), torus addition.
std::vector<double> gradient(const std::vector<double>& phi, int k, int scale);

// Dense matrix exponential route (cross-check oracle for the spectral kernel).
Eigen::MatrixXd kernel_dense_matrix(const KernelSpec& spec, double t);

struct KernelBoundsRow {
    double t = 0.0;
    double sup = 0.0;            // sup_y P_{0,t,0,y}
    double sup_scaled = 0.0;     // sup * N * t^{1/2}
    double grad_sup = 0.0;       // sup_y |grad_1^! P|
    double grad_scaled = 0.0;    // grad_sup * N * t
    double mass_deviation = 0.0; // |sum_y P - 1|
    double m2_ratio = 0.0;       // second moment / (alpha_bar N^2 t)
    double time_increment = 0.0; // sup_y |P(t+dt) - P(t)| for dt = t/4
    double offdiag_slope = 0.0;  // d log P / d distance in the tail
};

struct KernelBoundsReport {
    std::vector<KernelBoundsRow> rows;
    double on_diagonal_exponent = 0.0;  // log-log slope of sup vs t (expect -1/2)
    double gradient_exponent = 0.0;     // slope of grad_sup vs t (expect -1)
    double max_mass_deviation = 0.0;
};

KernelBoundsReport kernel_bounds_report(const KernelSpec& spec, const std::vector<double>& times);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace glab
