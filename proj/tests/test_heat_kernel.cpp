#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glab/heat_kernel.hpp"

using namespace glab;

namespace {
const KernelSpec spec64{64, 8, {0.5, 0.5}};
}

TEST_SUITE_BEGIN("heat_kernel");

TEST_CASE("laplacian kills constants") {
    std::vector<double> phi(32, 3.7);
    const auto out = laplacian_apply(KernelSpec{32, 4, {0.3, 0.7}}, phi);
    for (double v : out) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("fourier modes are eigenvectors with the plug-in eigenvalue") {
    const KernelSpec spec{48, 5, {0.2, 0.5, 0.3}};
    const int j = 7;
    const double theta = 2.0 * std::numbers::pi * j / 48.0;
    std::vector<double> cosx(48), sinx(48);
    for (int x = 0; x < 48; ++x) {
        cosx[x] = std::cos(theta * x);
        sinx[x] = std::sin(theta * x);
    }
    double mu = 0.0;
    for (int k = 1; k <= 3; ++k) mu += 25.0 * spec.alpha_tilde[k - 1] * (std::cos(k * theta) - 1.0);
    const auto lc = laplacian_apply(spec, cosx);
    const auto ls = laplacian_apply(spec, sinx);
    for (int x = 0; x < 48; ++x) {
        CHECK(lc[x] == doctest::Approx(mu * cosx[x]).epsilon(1e-10));
        CHECK(ls[x] == doctest::Approx(mu * sinx[x]).epsilon(1e-10));
    }
    CHECK(spec.eigenvalues()[j] == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("quadratic profile sees the diffusivity in the interior") {
    const KernelSpec spec{128, 6, {0.5, 0.5}};
    std::vector<double> phi(128);
    for (int x = 0; x < 128; ++x) {
        const double d = x - 64;
        phi[x] = d * d;
    }
    const auto out = laplacian_apply(spec, phi);
    // Delta_k x^2 = 2k^2 away from the wrap.
    for (int x = 32; x <= 96; ++x)
        CHECK(out[x] == doctest::Approx(spec.alpha_bar() * 36.0).epsilon(1e-10));
}

TEST_CASE("kernel row at equal times is the indicator") {
    const auto row = kernel_row(spec64, 0.3, 0.3, 5);
    for (int y = 0; y < 64; ++y) CHECK(row[y] == doctest::Approx(y == 5 ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("rows conserve mass at all times") {
    for (double t : {1e-4, 1e-3, 1e-2, 0.1}) {
        const auto row = kernel_row(spec64, 0.0, t, 11);
        double mass = 0.0;
        for (double v : row) mass += v;
        CHECK(std::abs(mass - 1.0) <= 1e-12);
    }
}

TEST_CASE("second moment grows like alpha_bar N^2 t before the wrap") {
    const double t = 2.0 / (spec64.alpha_bar() * 64.0);
    const auto row = kernel_row(spec64, 0.0, t, 0);
    double m2 = 0.0;
    for (int y = 0; y < 64; ++y) {
        const double d = std::min(y, 64 - y);
        m2 += d * d * row[y];
    }
    CHECK(m2 / (spec64.alpha_bar() * 64.0 * t) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Chapman-Kolmogorov composition") {
    const double s = 0.0, u = 0.003, t = 0.008;
    const auto first = kernel_row(spec64, s, u, 3);
    std::vector<double> composed(64, 0.0);
    for (int z = 0; z < 64; ++z) {
        const auto second = kernel_row(spec64, u, t, z);
        for (int y = 0; y < 64; ++y) composed[y] += first[z] * second[y];
    }
    const auto direct = kernel_row(spec64, s, t, 3);
    for (int y = 0; y < 64; ++y) CHECK(std::abs(composed[y] - direct[y]) <= 1e-10);
}

TEST_CASE("symmetry and translation invariance") {
    const double t = 0.004;
    const auto row0 = kernel_row(spec64, 0.0, t, 0);
    const auto row9 = kernel_row(spec64, 0.0, t, 9);
    for (int y = 0; y < 64; ++y) {
        CHECK(row9[(y + 9) % 64] == doctest::Approx(row0[y]).epsilon(1e-12));
        CHECK(row0[y] == doctest::Approx(row0[(64 - y) % 64]).epsilon(1e-12));
    }
}

TEST_CASE("spectral kernel equals the dense matrix exponential") {
    const double t = 0.005;
    const Eigen::MatrixXd expm = kernel_dense_matrix(spec64, t);
    for (int x : {0, 17, 40}) {
        const auto row = kernel_row(spec64, 0.0, t, x);
        for (int y = 0; y < 64; ++y) CHECK(std::abs(row[y] - expm(x, y)) <= 1e-10);
    }
}

TEST_CASE("heat operator preserves constants and reproduces rows") {
    std::vector<double> ones(64, 1.0);
    const auto flat = heat_operator_space(spec64, 0.02, ones);
    for (double v : flat) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> delta(64, 0.0);
    delta[23] = 1.0;
    const auto spread = heat_operator_space(spec64, 0.004, delta);
    const auto row = kernel_row(spec64, 0.0, 0.004, 23);
    for (int y = 0; y < 64; ++y) CHECK(spread[y] == doctest::Approx(row[y]).epsilon(1e-10));
}

TEST_CASE("linear profiles are discretely harmonic away from the wrap") {
    const KernelSpec spec{256, 8, {0.5, 0.5}};
    std::vector<double> lin(256);
    for (int x = 0; x < 256; ++x) lin[x] = static_cast<double>(x);
    const double t = 1.0 / (spec.alpha_bar() * 64.0);
    const auto out = heat_operator_space(spec, t, lin);
    for (int x = 64; x <= 192; ++x) CHECK(out[x] == doctest::Approx(lin[x]).epsilon(1e-8));
}

TEST_CASE("duhamel quadrature: constant forcing integrates to c t") {
    std::vector<std::vector<double>> fields{std::vector<double>(64, 0.7)};
    const auto out = heat_operator_spacetime(spec64, {0.0, 0.05}, fields);
    for (double v : out) CHECK(v == doctest::Approx(0.7 * 0.05).epsilon(1e-12));
}

TEST_CASE("duhamel identity: forcing with L phi recovers the semigroup increment") {
    std::vector<double> phi(64);
    for (int x = 0; x < 64; ++x) phi[x] = std::sin(2.0 * std::numbers::pi * 3 * x / 64.0);
    const double t = 0.006;
    const auto forcing = laplacian_apply(spec64, phi);
    const auto duhamel = heat_operator_spacetime(spec64, {0.0, t}, {forcing});
    const auto evolved = heat_operator_space(spec64, t, phi);
    for (int x = 0; x < 64; ++x)
        CHECK(duhamel[x] == doctest::Approx(evolved[x] - phi[x]).epsilon(1e-8));
}

TEST_CASE("early delta forcing approaches the kernel row") {
    const double eps = 1e-7, t = 0.004;
    std::vector<double> spike(64, 0.0);
    spike[30] = 1.0 / eps;
    const auto out =
        heat_operator_spacetime(spec64, {0.0, eps, t}, {spike, std::vector<double>(64, 0.0)});
    const auto row = kernel_row(spec64, 0.0, t, 30);
    for (int y = 0; y < 64; ++y) CHECK(out[y] == doctest::Approx(row[y]).epsilon(1e-4));
}

TEST_CASE("gradient operator is exact") {
    std::vector<double> phi(16, 2.0);
    for (double v : gradient(phi, 1, 8)) CHECK(v == 0.0);
    std::vector<double> ind(16, 0.0);
    ind[0] = 1.0;
    const auto g = gradient(ind, 1, 8);
    CHECK(g[15] == doctest::Approx(8.0));
    CHECK(g[0] == doctest::Approx(-8.0));
    for (int x = 1; x < 15; ++x) CHECK(g[x] == 0.0);
}

TEST_CASE("bounds report recovers the diffusive exponents") {
    const KernelSpec spec{1024, 16, {0.5, 0.5}};
    const double n2a = spec.alpha_bar() * 256.0;
    std::vector<double> times;
    for (int i = 0; i < 12; ++i) times.push_back(50.0 / n2a * std::pow(100.0, i / 11.0));
    const KernelBoundsReport report = kernel_bounds_report(spec, times);
    CHECK(report.max_mass_deviation <= 1e-12);
    CHECK(std::abs(report.on_diagonal_exponent + 0.5) <= 0.05);
    CHECK(std::abs(report.gradient_exponent + 1.0) <= 0.1);
    for (const auto& row : report.rows) {
        CHECK(row.m2_ratio == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(row.offdiag_slope < 0.0);
    }
}

TEST_SUITE_END();
