#include "glab/statespace.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace glab {

namespace {
StateSpace from_states(int sites, std::vector<uint32_t> states) {
    StateSpace s;
    s.sites = sites;
    s.states = std::move(states);
    s.index_of_mask.assign(1u << sites, -1);
    for (int i = 0; i < s.size(); ++i) s.index_of_mask[s.states[i]] = i;
    return s;
}
}  // namespace

StateSpace full_space(int sites) {
    if (sites < 1 || sites > 20) throw std::invalid_argument("full_space: need 1 <= sites <= 20");
    std::vector<uint32_t> st(1u << sites);
    for (uint32_t m = 0; m < st.size(); ++m) st[m] = m;
    return from_states(sites, std::move(st));
}

StateSpace hyperplane(int sites, int particles) {
    if (sites < 1 || sites > 20) throw std::invalid_argument("hyperplane: need 1 <= sites <= 20");
    if (particles < 0 || particles > sites) throw std::invalid_argument("hyperplane: bad count");
    std::vector<uint32_t> st;
    for (uint32_t m = 0; m < (1u << sites); ++m)
        if (std::popcount(m) == particles) st.push_back(m);
    return from_states(sites, std::move(st));
}

bool hyperplane_feasible(int sites, double rho, int* particles_out) {
    const double raw = 0.5 * (rho * sites + sites);
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9) return false;
    const int particles = static_cast<int>(rounded);
    if (particles < 0 || particles > sites) return false;
    if (particles_out) *particles_out = particles;
    return true;
}

Eigen::MatrixXd GeneratorMatrix::dense() const {
    Eigen::MatrixXd g = Eigen::MatrixXd(rates);
    for (int i = 0; i < g.rows(); ++i) g(i, i) -= g.row(i).sum();
    return g;
}

namespace {
GeneratorMatrix assemble(const StateSpace& space, int m, bool periodic,
                         const std::function<double(int k, int8_t sx, int8_t sy)>& rate_of) {
    const int n = space.sites;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < space.size(); ++i) {
        const uint32_t mask = space.states[i];
        for (int x = 0; x < n; ++x) {
            for (int k = 1; k <= m; ++k) {
                int y = x + k;
                if (periodic)
                    y %= n;
                else if (y >= n)
                    continue;
                if (y == x) continue;
                const int8_t sx = StateSpace::spin(mask, x);
                const int8_t sy = StateSpace::spin(mask, y);
                if (sx == sy) continue;  // swap is a no-op
                const uint32_t swapped = mask ^ (1u << x) ^ (1u << y);
                const int j = space.index(swapped);
                if (j < 0) continue;
                const double r = rate_of(k, sx, sy);
                if (r != 0.0) trip.emplace_back(i, j, r);
            }
        }
    }
    GeneratorMatrix gen;
    gen.rates.resize(space.size(), space.size());
    gen.rates.setFromTriplets(trip.begin(), trip.end());
    gen.periodic = periodic;
    return gen;
}
}  // namespace

GeneratorMatrix build_generator(const ModelParams& params, const StateSpace& space,
                                bool periodic) {
    auto gen = assemble(space, params.max_range(), periodic,
                        [&params](int k, int8_t sx, int8_t sy) {
                            return jump_rate_spins(params, k, sx, sy);
                        });
    gen.symmetric_only = false;
    gen.scaled = true;
    return gen;
}

GeneratorMatrix build_symmetric_part(const std::vector<double>& alpha, const StateSpace& space,
                                     bool scaled, int scale) {
    const double speed = scaled ? static_cast<double>(scale) * scale : 1.0;
    auto gen = assemble(space, static_cast<int>(alpha.size()), /*periodic=*/false,
                        [&alpha, speed](int k, int8_t, int8_t) { return speed * alpha[k - 1]; });
    gen.symmetric_only = true;
    gen.scaled = scaled;
    return gen;
}

LawVector product_bernoulli_law(const StateSpace& space, double rho) {
    const double p = 0.5 * (1.0 + rho);
    LawVector law;
    law.p.resize(space.size());
    for (int i = 0; i < space.size(); ++i) {
        const int ones = std::popcount(space.states[i]);
        law.p[i] = std::pow(p, ones) * std::pow(1.0 - p, space.sites - ones);
    }
    return law;
}

LawVector point_mass_law(const StateSpace& space, uint32_t mask) {
    LawVector law;
    law.p = Eigen::VectorXd::Zero(space.size());
    const int i = space.index(mask);
    if (i < 0) throw std::invalid_argument("point_mass_law: state not in space");
    law.p[i] = 1.0;
    return law;
}

Eigen::VectorXd evolve_law_uniformized(const SparseGen& rates, const Eigen::VectorXd& row,
                                       double T, double tol) {
    // mu e^{TG} with G = rates - diag(rowsum). Uniformize: P = I + G/Lambda,
    // mu e^{TG} = sum_k pois(k; Lambda T) mu P^k, chunked so Lambda*dt stays modest.
    const int n = static_cast<int>(rates.rows());
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < rates.outerSize(); ++i)
        for (SparseGen::InnerIterator it(rates, i); it; ++it) rowsum[i] += it.value();
    const double lambda = rowsum.maxCoeff();
    if (lambda <= 0.0 || T <= 0.0) return row;

    Eigen::VectorXd mu = row;
    double remaining = T;
    const double chunk = 64.0 / lambda;
    while (remaining > 0.0) {
        const double dt = std::min(remaining, chunk);
        remaining -= dt;
        const double a = lambda * dt;
        // term_0 = e^{-a} mu, then term_{k} = (a/k) term_{k-1} P
        Eigen::VectorXd term = mu;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        double coeff = std::exp(-a);
        acc += coeff * term;
        double tail = 1.0 - coeff;
        for (int k = 1; k < 100000 && tail > tol; ++k) {
            // term <- term P = term + (term G)/Lambda
            Eigen::VectorXd tg = rates.transpose() * term;
            tg -= rowsum.cwiseProduct(term);
            term += tg / lambda;
            coeff *= a / k;
            acc += coeff * term;
            tail -= coeff;
        }
        mu = acc;
    }
    return mu;
}

LawVector evolve_law_exact(const GeneratorMatrix& gen, const LawVector& law0, double T) {
    const int n = static_cast<int>(gen.rates.rows());
    if (law0.p.size() != n) throw std::invalid_argument("evolve_law_exact: dimension mismatch");
    if (n > 4096) throw std::invalid_argument("evolve_law_exact: state space exceeds 4096");
    if (T == 0.0) return law0;
    LawVector out;
    if (n <= 1024) {
        const Eigen::MatrixXd expm = (T * gen.dense()).exp();
        out.p = (law0.p.transpose() * expm).transpose();
    } else {
        out.p = evolve_law_uniformized(gen.rates, law0.p, T);
    }
    return out;
}

double stationarity_residual(const GeneratorMatrix& gen, const LawVector& mu) {
    const int n = static_cast<int>(gen.rates.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < gen.rates.outerSize(); ++i) {
        double rowsum = 0.0;
        for (SparseGen::InnerIterator it(gen.rates, i); it; ++it) {
            out[it.col()] += mu.p[i] * it.value();
            rowsum += it.value();
        }
        out[i] -= mu.p[i] * rowsum;
    }
    return out.cwiseAbs().maxCoeff();
}

}  // namespace glab
