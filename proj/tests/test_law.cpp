#include <doctest.h>

#include <cmath>
#include <random>

#include "glab/model.hpp"
#include "glab/rng.hpp"
#include "glab/statespace.hpp"

using namespace glab;

namespace {
ModelParams torus_model(int n, int L, double lambda = 0.5) {
    ModelParams p;
    p.scale = n;
    p.alpha = {0.5, 0.5};
    p.gamma = specialize_gamma(p.alpha, lambda);
    p.geometry = Geometry::torus(L);
    return p;
}
}  // namespace

TEST_SUITE_BEGIN("law");

TEST_CASE("T = 0 returns the initial law") {
    const ModelParams p = torus_model(4, 6);
    const StateSpace space = full_space(6);
    const GeneratorMatrix gen = build_generator(p, space, true);
    const LawVector law0 = product_bernoulli_law(space, 0.25);
    const LawVector out = evolve_law_exact(gen, law0, 0.0);
    CHECK((out.p - law0.p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("product Bernoulli laws are exactly stationary") {
    for (int L = 4; L <= 10; ++L) {
        const ModelParams p = torus_model(16, L);
        const StateSpace space = full_space(L);
        const GeneratorMatrix gen = build_generator(p, space, true);
        for (double rho : {-0.5, 0.0, 0.5}) {
            const LawVector mu = product_bernoulli_law(space, rho);
            CHECK(stationarity_residual(gen, mu) <= 1e-9);
        }
    }
}

TEST_CASE("invariant law is preserved by the exact evolution") {
    const ModelParams p = torus_model(4, 7);
    const StateSpace space = full_space(7);
    const GeneratorMatrix gen = build_generator(p, space, true);
    const LawVector mu = product_bernoulli_law(space, 0.0);
    const LawVector out = evolve_law_exact(gen, mu, 0.08);
    CHECK((out.p - mu.p).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(out.valid(1e-9));
}

TEST_CASE("empty-lattice law is fixed for any horizon") {
    const ModelParams p = torus_model(3, 6);
    const StateSpace space = full_space(6);
    const GeneratorMatrix gen = build_generator(p, space, true);
    const LawVector mu = product_bernoulli_law(space, -1.0);  // all holes
    const LawVector out = evolve_law_exact(gen, mu, 0.7);
    CHECK((out.p - mu.p).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("two-state segment chain matches the closed form") {
    ModelParams p;
    p.scale = 3;
    p.alpha = {1.0};
    p.gamma = {0.0};
    p.geometry = Geometry::segment(1);
    const StateSpace space = full_space(2);
    const GeneratorMatrix gen = build_generator(p, space, /*periodic=*/false);
    const LawVector start = point_mass_law(space, 0b01);
    const double T = 0.011;
    const LawVector out = evolve_law_exact(gen, start, T);
    const double rate = 9.0;  // N^2 alpha_1
    const double stay = 0.5 * (1.0 + std::exp(-2.0 * rate * T));
    CHECK(out.p[space.index(0b01)] == doctest::Approx(stay).epsilon(1e-9));
    CHECK(out.p[space.index(0b10)] == doctest::Approx(1.0 - stay).epsilon(1e-9));
}

TEST_CASE("uniformized evolution agrees with the dense exponential") {
    const ModelParams p = torus_model(5, 6, 0.8);
    const StateSpace space = full_space(6);
    const GeneratorMatrix gen = build_generator(p, space, true);
    Rng rng = make_rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd raw(space.size());
    for (int i = 0; i < raw.size(); ++i) raw[i] = u(rng);
    raw /= raw.sum();
    const LawVector dense = evolve_law_exact(gen, LawVector{raw}, 0.05);
    const Eigen::VectorXd uni = evolve_law_uniformized(gen.rates, raw, 0.05);
    CHECK((dense.p - uni).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("symmetric generator restricted to a hyperplane is symmetric") {
    ModelParams p = torus_model(4, 8, 0.0);
    p.gamma = {0.0, 0.0};
    const StateSpace hp = hyperplane(8, 4);
    const GeneratorMatrix gen = build_generator(p, hp, true);
    const Eigen::MatrixXd g = gen.dense();
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("dimension guard rejects oversized spaces") {
    const ModelParams p = torus_model(2, 13);
    const StateSpace space = full_space(13);
    const GeneratorMatrix gen = build_generator(p, space, true);
    const LawVector law0 = product_bernoulli_law(space, 0.0);
    CHECK_THROWS(evolve_law_exact(gen, law0, 0.1));
}

TEST_SUITE_END();
