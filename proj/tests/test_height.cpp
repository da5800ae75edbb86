#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "glab/height.hpp"
#include "glab/model.hpp"
#include "glab/simulate.hpp"
#include "glab/spin.hpp"
#include "glab/statespace.hpp"

using namespace glab;

namespace {
ModelParams torus_model(int n, int L, double lambda) {
    ModelParams p;
    p.scale = n;
    p.alpha = {0.5, 0.5};
    p.gamma = specialize_gamma(p.alpha, lambda);
    p.geometry = Geometry::torus(L);
    return p;
}
}  // namespace

TEST_SUITE_BEGIN("height");

TEST_CASE("narrow wedge has the tent profile |x| / sqrt(N)") {
    const int n = 16;
    const Geometry g = Geometry::segment(6);
    const SpinConfig c = make_narrow_wedge(g);
    const HeightField h = init_height(c, n);
    for (int x = -6; x <= 6; ++x)
        CHECK(h.at_label(x) == doctest::Approx(std::abs(x) / 4.0).epsilon(1e-14));
}

TEST_CASE("all-plus profile is linear") {
    const Geometry g = Geometry::segment(5);
    const SpinConfig c = make_all(g, 1);
    const HeightField h = init_height(c, 25);
    for (int x = -5; x <= 5; ++x)
        CHECK(h.at_label(x) == doctest::Approx(x / 5.0).epsilon(1e-14));
}

TEST_CASE("increment identity holds at initialization") {
    Rng rng = make_rng(12);
    const Geometry g = Geometry::torus(24);
    const SpinConfig c = make_bernoulli(g, 0.0, rng);
    const HeightField h = init_height(c, 9);
    CHECK(increment_identity_error(h, c) <= 1e-14);
}

TEST_CASE("crossing events move h0 by exactly 2/sqrt(N)") {
    const int n = 4;
    const Geometry g = Geometry::segment(4);
    SpinConfig c = make_all(g, -1);
    c.spins[c.index_of_label(1)] = 1;  // particle at 1
    HeightField h = init_height(c, n);
    const std::vector<double> before = h.values;
    // hop 1 -> 0 is a leftward crossing of the marked edge
    JumpEvent ev;
    ev.x = 0;
    ev.k = 1;
    ev.executed = true;
    ev.direction = JumpDirection::Left;
    update_height(h, ev);
    CHECK(h.h0() == doctest::Approx(before[h.index_of_label(0)] + 1.0));  // +2/sqrt(4)
    for (int x = 1; x <= 4; ++x)
        CHECK(h.at_label(x) == doctest::Approx(before[h.index_of_label(x)]));
}

TEST_CASE("non-crossing hops leave h0 unchanged") {
    const Geometry g = Geometry::segment(8);
    SpinConfig c = make_all(g, -1);
    c.spins[c.index_of_label(3)] = 1;
    HeightField h = init_height(c, 4);
    const double h0 = h.h0();
    JumpEvent ev;
    ev.x = 3;
    ev.k = 2;
    ev.executed = true;
    ev.direction = JumpDirection::Right;  // hop 3 -> 5
    update_height(h, ev);
    CHECK(h.h0() == doctest::Approx(h0));
    // the two passed columns moved down by 2/sqrt(N)
    CHECK(h.at_label(3) == doctest::Approx(init_height(c, 4).at_label(3) - 1.0));
}

TEST_CASE("no-op events leave the field unchanged") {
    const Geometry g = Geometry::segment(4);
    const SpinConfig c = make_all(g, 1);
    HeightField h = init_height(c, 4);
    const std::vector<double> before = h.values;
    JumpEvent ev;
    ev.executed = false;
    update_height(h, ev);
    CHECK(h.values == before);
}

TEST_CASE("incremental height tracks replayed events on the torus") {
    const ModelParams p = torus_model(9, 18, 0.5);
    Rng rng = make_rng(3);
    SpinConfig c = make_bernoulli(p.geometry, 0.0, rng);
    HeightField h = init_height(c, p.scale);
    Simulator sim(p, c, 31);
    for (int i = 0; i < 4000; ++i) {
        const JumpEvent ev = sim.step();
        update_height(h, ev);
        if (i % 500 == 0) CHECK(increment_identity_error(h, sim.config()) <= 1e-10);
    }
    CHECK(increment_identity_error(h, sim.config()) <= 1e-10);
}

TEST_CASE("gartner transform with lambda 0 is flat") {
    const Geometry g = Geometry::torus(8);
    const SpinConfig c = make_flat(g);
    const HeightField h = init_height(c, 4);
    const GartnerField z = gartner(h, 0.0, 1.5, 2.0);
    for (double v : z.values()) CHECK(v == doctest::Approx(std::exp(3.0)));
}

TEST_CASE("narrow wedge Z at time zero") {
    const int n = 25;
    const Geometry g = Geometry::segment(5);
    const SpinConfig c = make_narrow_wedge(g);
    const HeightField h = init_height(c, n);
    const GartnerField z = gartner(h, 0.8, 0.0, 0.0);
    for (int x = -5; x <= 5; ++x)
        CHECK(z.value(h.index_of_label(x)) ==
              doctest::Approx(std::exp(-0.8 * std::abs(x) / 5.0)).epsilon(1e-12));
}

TEST_CASE("Bernoulli initial data: E Z matches the cosh moment formula") {
    const int n = 16;
    const double lambda = 0.7;
    const Geometry g = Geometry::segment(10);
    const int x = 6;
    // E exp(-lambda N^{-1/2} sum_{y<=x} eta_y) = cosh(lambda/sqrt(N))^x for x > 0
    double acc = 0.0;
    const int replicas = 200000;
    Rng rng = make_rng(8);
    for (int r = 0; r < replicas; ++r) {
        const SpinConfig c = make_bernoulli(g, 0.0, rng);
        const HeightField h = init_height(c, n);
        acc += std::exp(-lambda * h.at_label(x));
    }
    acc /= replicas;
    const double expect = std::pow(std::cosh(lambda / 4.0), x);
    CHECK(std::abs(acc - expect) <= 4.0 * expect * std::sqrt(1.0 / replicas));
}

TEST_CASE("log-domain guard keeps Z positive for huge lambda h") {
    const Geometry g = Geometry::segment(4);
    const SpinConfig c = make_narrow_wedge(g);
    HeightField h = init_height(c, 1);  // N = 1 so h = |x|
    const GartnerField z = gartner(h, 300.0, 0.0, 0.0);  // lambda h up to 1200
    CHECK(std::isfinite(z.log_at(0)));
    CHECK(z.value(h.index_of_label(4)) >= 0.0);
    CHECK(std::exp(z.log_at(h.index_of_label(-4))) == z.value(h.index_of_label(-4)));
}

TEST_CASE("narrow wedge rescale multiplies by N^{1/2} / (2 lambda)") {
    const Geometry g = Geometry::segment(3);
    const SpinConfig c = make_narrow_wedge(g);
    const HeightField h = init_height(c, 16);
    const GartnerField z = gartner(h, 0.5, 0.0, 0.0);
    const GartnerField w = narrow_wedge_rescale(z, 16);
    CHECK(w.value(0) == doctest::Approx(z.value(0) * 4.0).epsilon(1e-12));
}

TEST_CASE("field snapshots round-trip through CSV plus manifest") {
    const Geometry g = Geometry::torus(8);
    const SpinConfig c = make_flat(g);
    const HeightField h = init_height(c, 16);
    const GartnerField z = gartner(h, 0.5, -3.25, 0.125);
    const std::string dir =
        (std::filesystem::temp_directory_path() / "glab_snapshot_test").string();
    std::filesystem::remove_all(dir);
    write_field_snapshot(dir, c, h, z, 4242);
    std::ifstream csv(dir + "/field.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,eta,h,Z");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 8);
    std::ifstream mf(dir + "/manifest.json");
    std::string manifest((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
    CHECK(manifest.find("\"N\": 16") != std::string::npos);
    CHECK(manifest.find("\"seed\": 4242") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("calibrated vN vanishes with the asymmetry") {
    ModelParams p = torus_model(16, 12, 0.0);
    p.gamma = {0.0, 0.0};
    const DerivedConstants c = derive_constants(p);
    CHECK(calibrate_vN(p, c) == 0.0);
}

TEST_CASE("calibrated vN matches the flux-augmented exact law derivative") {
    // Oracle: evolve the (configuration, flux) chain exactly on a small torus
    // and Richardson-extrapolate d/dT E exp(-lambda h0) at T = 0.
    const ModelParams p = torus_model(9, 8, 0.5);
    const DerivedConstants c = derive_constants(p);
    const double vn = calibrate_vN(p, c);

    const int L = 8, K = 6;  // flux truncated to |f| <= K
    const StateSpace space = full_space(L);
    const int flux_states = 2 * K + 1;
    const int dim = space.size() * flux_states;
    auto id = [&](int s, int f) { return s * flux_states + (f + K); };

    std::vector<Eigen::Triplet<double>> trip;
    for (int s = 0; s < space.size(); ++s) {
        const uint32_t mask = space.states[s];
        for (int x = 0; x < L; ++x) {
            for (int k = 1; k <= p.max_range(); ++k) {
                const int y = (x + k) % L;
                const int8_t sx = StateSpace::spin(mask, x);
                const int8_t sy = StateSpace::spin(mask, y);
                if (sx == sy) continue;
                const double rate = jump_rate_spins(p, k, sx, sy);
                const int target = space.index(mask ^ (1u << x) ^ (1u << y));
                // crossing of the cut between sites 0 and 1: wrap beyond L or x = 0
                const bool crossing = x == 0 || x + k >= L + 1;
                int df = 0;
                if (crossing) df = sx == 1 ? -1 : 1;  // leftward flux positive
                for (int f = -K; f <= K; ++f) {
                    const int fn = std::clamp(f + df, -K, K);
                    trip.emplace_back(id(s, f), id(target, fn), rate);
                }
            }
        }
    }
    SparseGen rates(dim, dim);
    rates.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd law0 = Eigen::VectorXd::Zero(dim);
    const LawVector mu = product_bernoulli_law(space, 0.0);
    for (int s = 0; s < space.size(); ++s) law0[id(s, 0)] = mu.p[s];

    auto mean_z = [&](const Eigen::VectorXd& law) {
        double acc = 0.0;
        for (int s = 0; s < space.size(); ++s)
            for (int f = -K; f <= K; ++f)
                acc += law[id(s, f)] * std::exp(-c.lambda * 2.0 * f / 3.0);  // sqrt(N) = 3
        return acc;
    };

    const double T = 1e-4;
    const double d1 = (mean_z(evolve_law_uniformized(rates, law0, T)) - 1.0) / T;
    const double d2 = (mean_z(evolve_law_uniformized(rates, law0, 2.0 * T)) - 1.0) / (2.0 * T);
    const double d3 = (mean_z(evolve_law_uniformized(rates, law0, 3.0 * T)) - 1.0) / (3.0 * T);
    const double derivative = 3.0 * d1 - 3.0 * d2 + d3;  // kills the T and T^2 terms
    CHECK(std::abs(-derivative - vn) <= 1e-6 * std::max(1.0, std::abs(vn)));
}

TEST_CASE("Monte Carlo stationary drift of Z is centered at zero") {
    // Nearest-neighbor model. E Z_{T,0} - 1 = vanishing-derivative * T + O(T^2);
    // the Richardson combination 2 d(T/2) - d(T) of the finite-difference
    // drifts removes the O(T) bias, leaving pure Monte Carlo noise.
    ModelParams p;
    p.scale = 25;
    p.alpha = {1.0};
    p.gamma = {1.2};
    p.geometry = Geometry::torus(16);
    const DerivedConstants c = derive_constants(p);
    const double vn = calibrate_vN(p, c);
    const double T = 0.8 / (25.0 * 25.0);
    const int replicas = 1000;
    const double root_n = 5.0;

    auto drift_samples = [&](double horizon, uint64_t salt) {
        std::vector<double> out(replicas);
        Rng rng = make_rng(44 + salt);
        for (int r = 0; r < replicas; ++r) {
            const SpinConfig initial = make_bernoulli(p.geometry, 0.0, rng);
            Simulator sim(p, initial, mix_seed(13 + salt, r));
            sim.run_until(horizon);
            out[r] = (std::exp(-c.lambda * 2.0 * sim.flux_left() / root_n + vn * horizon) - 1.0) /
                     horizon;
        }
        return out;
    };
    const std::vector<double> d_full = drift_samples(T, 0);
    const std::vector<double> d_half = drift_samples(0.5 * T, 1);
    double mean = 0.0, var = 0.0;
    std::vector<double> combined(replicas);
    for (int r = 0; r < replicas; ++r) combined[r] = 2.0 * d_half[r] - d_full[r];
    for (double s : combined) mean += s;
    mean /= replicas;
    for (double s : combined) var += (s - mean) * (s - mean);
    var /= (replicas - 1);
    CHECK(std::abs(mean) <= 2.5 * std::sqrt(var / replicas));
}

TEST_SUITE_END();
