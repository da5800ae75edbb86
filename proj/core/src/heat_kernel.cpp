#include "glab/heat_kernel.hpp"

#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace glab {

namespace {
std::mutex fftw_mutex;  // plan creation is not thread-safe

// In-place DFT of a complex vector (FFTW_FORWARD: sum_x v_x e^{-2pi i jx/L}).
void dft(std::vector<std::complex<double>>& v, int sign) {
    std::unique_lock<std::mutex> lock(fftw_mutex);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(v.size()),
                                      reinterpret_cast<fftw_complex*>(v.data()),
                                      reinterpret_cast<fftw_complex*>(v.data()), sign,
                                      FFTW_ESTIMATE);
    lock.unlock();
    fftw_execute(plan);
    lock.lock();
    fftw_destroy_plan(plan);
}
}  // namespace

std::vector<double> KernelSpec::eigenvalues() const {
    std::vector<double> mu(length, 0.0);
    const double n2 = static_cast<double>(scale) * scale;
    for (int j = 0; j < length; ++j) {
        double acc = 0.0;
        for (size_t k = 1; k <= alpha_tilde.size(); ++k) {
            const double theta = 2.0 * std::numbers::pi * j * static_cast<double>(k) / length;
            acc += alpha_tilde[k - 1] * (std::cos(theta) - 1.0);
        }
        mu[j] = n2 * acc;
    }
    return mu;
}

std::vector<double> laplacian_apply(const KernelSpec& spec, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != spec.length)
        throw std::invalid_argument("laplacian_apply: size mismatch");
    const int L = spec.length;
    const double n2 = static_cast<double>(spec.scale) * spec.scale;
    std::vector<double> out(L, 0.0);
    for (int x = 0; x < L; ++x) {
        double acc = 0.0;
        for (size_t k = 1; k <= spec.alpha_tilde.size(); ++k) {
            const int xp = static_cast<int>((x + k) % L);
            const int xm = static_cast<int>((x + L - k % L) % L);
            acc += spec.alpha_tilde[k - 1] * (phi[xp] + phi[xm] - 2.0 * phi[x]);
        }
        out[x] = 0.5 * n2 * acc;
    }
    return out;
}

std::vector<double> kernel_row(const KernelSpec& spec, double s, double t, int x) {
    if (t < s) throw std::invalid_argument("kernel_row: t < s");
    const int L = spec.length;
    const std::vector<double> mu = spec.eigenvalues();
    std::vector<std::complex<double>> v(L);
    for (int j = 0; j < L; ++j) v[j] = std::exp(mu[j] * (t - s)) / static_cast<double>(L);
    dft(v, FFTW_BACKWARD);  // row at displacement d = sum_j a_j e^{2pi i jd/L}
    std::vector<double> row(L);
    for (int y = 0; y < L; ++y) {
        const int d = ((y - x) % L + L) % L;
        row[y] = v[d].real();
    }
    return row;
}

std::vector<double> heat_operator_space(const KernelSpec& spec, double t,
                                        const std::vector<double>& phi0) {
    if (static_cast<int>(phi0.size()) != spec.length)
        throw std::invalid_argument("heat_operator_space: size mismatch");
    const int L = spec.length;
    const std::vector<double> mu = spec.eigenvalues();
    std::vector<std::complex<double>> v(phi0.begin(), phi0.end());
    dft(v, FFTW_FORWARD);
    for (int j = 0; j < L; ++j) v[j] *= std::exp(mu[j] * t) / static_cast<double>(L);
    dft(v, FFTW_BACKWARD);
    std::vector<double> out(L);
    for (int x = 0; x < L; ++x) out[x] = v[x].real();
    return out;
}

std::vector<double> heat_operator_spacetime(const KernelSpec& spec,
                                            const std::vector<double>& breaks,
                                            const std::vector<std::vector<double>>& fields) {
    if (breaks.size() != fields.size() + 1)
        throw std::invalid_argument("heat_operator_spacetime: breaks must bracket fields");
    const int L = spec.length;
    const double t = breaks.back();
    const std::vector<double> mu = spec.eigenvalues();
    std::vector<std::complex<double>> acc(L, 0.0);
    std::vector<std::complex<double>> v(L);
    for (size_t i = 0; i < fields.size(); ++i) {
        const double s0 = breaks[i], s1 = breaks[i + 1];
        if (s1 < s0) throw std::invalid_argument("heat_operator_spacetime: unsorted breaks");
        if (s1 == s0) continue;
        if (static_cast<int>(fields[i].size()) != L)
            throw std::invalid_argument("heat_operator_spacetime: field size mismatch");
        v.assign(fields[i].begin(), fields[i].end());
        dft(v, FFTW_FORWARD);
        for (int j = 0; j < L; ++j) {
            // int_{s0}^{s1} e^{mu (t-s)} ds, exact per mode.
            const double w = std::abs(mu[j]) * (s1 - s0) < 1e-12
                                 ? s1 - s0
                                 : (std::exp(mu[j] * (t - s0)) - std::exp(mu[j] * (t - s1))) / mu[j];
            acc[j] += v[j] * (w / static_cast<double>(L));
        }
    }
    dft(acc, FFTW_BACKWARD);
    std::vector<double> out(L);
    for (int x = 0; x < L; ++x) out[x] = acc[x].real();
    return out;
}

std::vector<double> gradient(const std::vector<double>& phi, int k, int scale) {
    const int L = static_cast<int>(phi.size());
    std::vector<double> out(L);
    for (int x = 0; x < L; ++x) out[x] = scale * (phi[(x + k % L + L) % L] - phi[x]);
    return out;
}

Eigen::MatrixXd kernel_dense_matrix(const KernelSpec& spec, double t) {
    const int L = spec.length;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(L, L);
    const double n2 = static_cast<double>(spec.scale) * spec.scale;
    for (int x = 0; x < L; ++x) {
        for (size_t k = 1; k <= spec.alpha_tilde.size(); ++k) {
            const int xp = static_cast<int>((x + k) % L);
            const int xm = static_cast<int>((x + L - k % L) % L);
            const double w = 0.5 * n2 * spec.alpha_tilde[k - 1];
            gen(x, xp) += w;
            gen(x, xm) += w;
            gen(x, x) -= 2.0 * w;
        }
    }
    return (t * gen).exp();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad data");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

KernelBoundsReport kernel_bounds_report(const KernelSpec& spec, const std::vector<double>& times) {
    KernelBoundsReport report;
    const int L = spec.length;
    const double n = spec.scale;
    const double abar = spec.alpha_bar();
    std::vector<double> sups, grads;
    for (double t : times) {
        KernelBoundsRow row;
        row.t = t;
        const std::vector<double> p = kernel_row(spec, 0.0, t, 0);
        const std::vector<double> g = gradient(p, 1, spec.scale);
        double mass = 0.0, m2 = 0.0;
        for (int y = 0; y < L; ++y) {
            mass += p[y];
            const double d = std::min(y, L - y);
            m2 += d * d * p[y];
            row.sup = std::max(row.sup, p[y]);
            row.grad_sup = std::max(row.grad_sup, std::abs(g[y]));
        }
        row.mass_deviation = std::abs(mass - 1.0);
        row.m2_ratio = m2 / (abar * n * n * t);
        row.sup_scaled = row.sup * n * std::sqrt(t);
        row.grad_scaled = row.grad_sup * n * t;

        const std::vector<double> p_later = kernel_row(spec, 0.0, 1.25 * t, 0);
        for (int y = 0; y < L; ++y)
            row.time_increment = std::max(row.time_increment, std::abs(p_later[y] - p[y]));

        // Tail slope of log P over geodesic distances in (2 sigma, 4 sigma).
        const double sigma = std::sqrt(abar) * n * std::sqrt(t);
        std::vector<double> ds, ps;
        for (int d = static_cast<int>(2 * sigma) + 1;
             d <= std::min(L / 2 - 1, static_cast<int>(4 * sigma) + 1); ++d)
            if (p[d] > 1e-300) {
                ds.push_back(d);
                ps.push_back(p[d]);
            }
        if (ds.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < ds.size(); ++i) {
                sx += ds[i];
                sy += std::log(ps[i]);
                sxx += ds[i] * ds[i];
                sxy += ds[i] * std::log(ps[i]);
            }
            const double cnt = static_cast<double>(ds.size());
            row.offdiag_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        }

        report.max_mass_deviation = std::max(report.max_mass_deviation, row.mass_deviation);
        report.rows.push_back(row);
        sups.push_back(row.sup);
        grads.push_back(row.grad_sup);
    }
    report.on_diagonal_exponent = loglog_slope(times, sups);
    report.gradient_exponent = loglog_slope(times, grads);
    return report;
}

}  // namespace glab
