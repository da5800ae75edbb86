// Acceptance suite: one criterion per --criterion index, pass/fail line each.
// Exit code 0 iff every executed criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "glab/config.hpp"
#include "glab/ensembles.hpp"
#include "glab/experiments.hpp"
#include "glab/functionals.hpp"
#include "glab/heat_kernel.hpp"
#include "glab/height.hpp"
#include "glab/model.hpp"
#include "glab/norms.hpp"
#include "glab/she.hpp"
#include "glab/simulate.hpp"
#include "glab/statespace.hpp"

using namespace glab;

namespace {

struct Criterion {
    int index;
    const char* label;
    std::function<bool(std::string&)> run;
};

bool record_ok(const RunRecord& record, std::string& detail) {
    for (const auto& [name, ok] : record.assertions)
        if (!ok) detail += " FAILED:" + name;
    return record.passed();
}

// 1. Specialized-asymmetry identity over 500 random parameter sets, m <= 8.
bool criterion_mean_invariance(std::string& detail) {
    Rng rng = make_rng(1001);
    std::uniform_int_distribution<int> m_dist(1, 8);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::uniform_real_distribution<double> g(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int m = m_dist(rng);
        ModelParams p;
        p.scale = 100;
        p.alpha.resize(m);
        p.gamma.resize(m);
        double sum = 0.0;
        for (double& a : p.alpha) sum += (a = u(rng));
        for (double& a : p.alpha) a /= sum;
        for (double& x : p.gamma) x = g(rng);
        p.geometry = Geometry::torus(4 * m + 2);
        worst = std::max(worst, mean_invariance_residual(p));
    }
    detail = "max residual " + std::to_string(worst);
    return worst <= 1e-10;
}

// 2. Exact stationarity of product measures under the full asymmetric dynamic.
bool criterion_stationarity(std::string& detail) {
    ModelParams base;
    base.scale = 16;
    base.alpha = {0.5, 0.5};
    base.gamma = specialize_gamma(base.alpha, 0.5);
    double worst = 0.0;
    for (int L = 4; L <= 10; ++L) {
        ModelParams p = base;
        p.geometry = Geometry::torus(L);
        const StateSpace space = full_space(L);
        const GeneratorMatrix gen = build_generator(p, space, true);
        for (double rho : {-0.5, 0.0, 0.5})
            worst = std::max(worst, stationarity_residual(gen, product_bernoulli_law(space, rho)));
    }
    detail = "max |mu G|_inf " + std::to_string(worst);
    return worst <= 1e-9;
}

// 3. Height/Gartner consistency over one million events.
bool criterion_height_consistency(std::string& detail) {
    ModelParams p;
    p.scale = 32;
    p.alpha = {0.5, 0.5};
    p.gamma = specialize_gamma(p.alpha, 0.5);
    p.geometry = Geometry::torus(128);
    const DerivedConstants c = derive_constants(p);
    const double vN = calibrate_vN(p, c);
    Rng init_rng = make_rng(33);
    const SpinConfig initial = make_bernoulli(p.geometry, 0.0, init_rng);
    Simulator sim(p, initial, 4242);
    HeightField h = init_height(initial, p.scale);
    const double root_n = std::sqrt(32.0);

    double worst_identity = 0.0;
    double worst_logz = 0.0;
    const long events = 1000000;
    for (long e = 0; e < events; ++e) {
        const JumpEvent ev = sim.step();
        update_height(h, ev);
        if (ev.executed) {
            // local increment identity at the touched columns
            for (int j = -1; j <= ev.k; ++j) {
                const int label = ev.x + j;
                const int idx = h.index_of_label(label);
                if (idx == 0) continue;
                const double lhs = h.values[idx] - h.values[idx - 1];
                const double rhs = sim.config().spins[idx] / root_n;
                worst_identity = std::max(worst_identity, std::abs(lhs - rhs));
            }
        }
        if (e % 100000 == 0 || e + 1 == events) {
            worst_identity =
                std::max(worst_identity, increment_identity_error(h, sim.config()));
            // recomputed log Z: fresh prefix sums anchored by the flux counter
            HeightField fresh = init_height(sim.config(), p.scale);
            const double h0 = 2.0 * sim.flux_left() / root_n;
            for (int i = 0; i < static_cast<int>(fresh.values.size()); ++i) {
                const double log_inc = -c.lambda * h.values[i] + vN * sim.time();
                const double log_re = -c.lambda * (fresh.values[i] + h0) + vN * sim.time();
                worst_logz = std::max(worst_logz, std::abs(log_inc - log_re));
            }
        }
    }
    detail = "identity " + std::to_string(worst_identity) + ", logZ " + std::to_string(worst_logz);
    return worst_identity <= 1e-12 && worst_logz <= 1e-9;
}

// 4. Heat kernel exactness at L = 64.
bool criterion_heat_kernel(std::string& detail) {
    const KernelSpec spec{64, 8, {0.5, 0.5}};
    double worst_dense = 0.0;
    for (double t : {0.001, 0.005, 0.02}) {
        const Eigen::MatrixXd expm = kernel_dense_matrix(spec, t);
        for (int x : {0, 13, 50}) {
            const auto row = kernel_row(spec, 0.0, t, x);
            for (int y = 0; y < 64; ++y)
                worst_dense = std::max(worst_dense, std::abs(row[y] - expm(x, y)));
        }
    }
    Config cfg = Config::parse_text("experiment = \"kernel-bounds\"\nN = 8\nL = 2048\n");
    const RunRecord record = experiment_kernel_bounds(cfg);
    detail = "dense gap " + std::to_string(worst_dense) + ", on-diag exponent " +
             std::to_string(record.tables.at("fits").rows[0][0]);
    return worst_dense <= 1e-10 && record_ok(record, detail);
}

// 5. Kipnis-Varadhan constant on tori |I| in {4,6,8}.
bool criterion_kv(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"kv\"\nN = 100\nalpha = [0.5, 0.5]\ngamma_mode = \"specialized\"\n"
        "lambda = 0.5\n");
    const RunRecord record = experiment_kv(cfg);
    detail = "empirical constant " + record.notes.at("empirical_kv_constant");
    return record_ok(record, detail);
}

// 6. Disjoint-support averaging on |I| = 12 for J in {2,3,4}.
bool criterion_disjoint(std::string& detail) {
    // width-3 pseudo-gradient so four disjoint translates fit in 12 sites
    const LocalFunctional g = subtract(spin_pair(1, 2), spin_pair(0, 1), "grad_pair");
    bool ok = true;
    for (int J : {2, 3, 4}) {
        std::vector<int> shifts;
        for (int j = 0; j < J; ++j) shifts.push_back(3 * j);
        const DisjointAverageReport r =
            disjoint_average_bound_check(g, shifts, 12, {0.5, 0.5});
        detail += " J=" + std::to_string(J) + ":" + std::to_string(r.ratio);
        if (r.ratio > 4.0) ok = false;
    }
    return ok;
}

// 7. Azuma tails by exact enumeration, J <= 4, |I| <= 14.
bool criterion_azuma(std::string& detail) {
    Config cfg = Config::parse_text("experiment = \"azuma\"\nJ = 4\nsites = 14\n");
    const RunRecord record = experiment_azuma(cfg);
    Config cfg2 = Config::parse_text("experiment = \"azuma\"\nJ = 3\nsites = 12\nrho = 0.0\n");
    const RunRecord record2 = experiment_azuma(cfg2);
    return record_ok(record, detail) && record_ok(record2, detail);
}

// 8. Diffusive gap band and LSI ratio band.
bool criterion_gap_lsi(std::string& detail) {
    Config cfg = Config::parse_text("experiment = \"lsi\"\nalpha = [0.5, 0.5]\ndensities = 1000\n");
    const RunRecord record = experiment_lsi(cfg);
    detail = "max LSI ratio " + record.notes.at("lsi_max_ratio");
    return record_ok(record, detail);
}

// 9. Entropy production analogue.
bool criterion_entropy_production(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"entropy-production\"\nN = 2\nL = 8\nalpha = [0.5, 0.5]\n"
        "gamma_mode = \"specialized\"\nlambda = 0.4\nT = 1.5\n");
    const RunRecord record = experiment_entropy_production(cfg);
    const auto& sums = record.tables.at("integrals").rows[0];
    detail = "integral N " + std::to_string(sums[1]) + " -> 2N " + std::to_string(sums[2]);
    return record_ok(record, detail);
}

// 10. Localization coupling contamination frequency.
bool criterion_coupling(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"coupling\"\nN = 64\nalpha = [0.5, 0.5]\ngamma_mode = \"specialized\"\n"
        "lambda = 0.5\nreplicas = 1000\nlog_factor = 10\nseed = 606\n");
    const RunRecord record = experiment_coupling(cfg);
    detail = "frequency " + std::to_string(record.tables.at("contamination").rows[0][5]);
    return record_ok(record, detail);
}

// 11. Time-regularity exponent at N = 128, flat data.
bool criterion_holder(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"holder\"\nN = 128\nalpha = [0.5, 0.5]\ngamma_mode = \"specialized\"\n"
        "lambda = 0.5\ninitial = \"flat\"\nreplicas = 200\nseed = 1111\n");
    const RunRecord record = experiment_holder(cfg);
    detail = "slope " + record.notes.at("holder_slope");
    return record_ok(record, detail);
}

// 12. Multiscale decay along the geometric ladder.
bool criterion_schedule_decay(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"schedule-decay\"\nN = 64\nalpha = [0.5, 0.5]\n"
        "gamma_mode = \"specialized\"\nlambda = 0.5\nreplicas = 160\nwindows = 8\nseed = 2222\n");
    const RunRecord record = experiment_schedule_decay(cfg);
    const auto& rows = record.tables.at("decay").rows;
    detail = "E|A|^2 " + std::to_string(rows.front()[2]) + " -> " +
             std::to_string(rows.back()[2]);
    return record_ok(record, detail);
}

// 13. Desk-scale universality trend against the SHE reference.
bool criterion_kpz_compare(std::string& detail) {
    Config cfg = Config::parse_text(
        "experiment = \"kpz-compare\"\nalpha = [0.5, 0.5]\ngamma_mode = \"specialized\"\n"
        "lambda = 0.5\nT = 0.5\nreplicas = 1000\ninitial = \"flat\"\nseed = 3333\n");
    const RunRecord record = experiment_kpz_compare(cfg);
    const auto& rows = record.tables.at("compare").rows;
    detail = "KS";
    for (const auto& r : rows) detail += " " + std::to_string(r[1]);
    return record_ok(record, detail);
}

// 14. SHE solver sanity: martingale mean, positivity, refinement consistency.
bool criterion_she(std::string& detail) {
    const double T = 0.04, alpha = 2.5, lambda = 0.5;
    SheGrid g0 = make_she_grid(4.0, 0.05, alpha, lambda);
    for (int i = 0; i < g0.cells(); ++i)
        g0.z[i] = 1.0 + 0.8 * std::exp(-std::pow((i - g0.origin_cell()) * g0.dx / 0.4, 2));
    long clamps = 0;
    const auto fields = she_solve(g0, T, 3000, 1414, &clamps);
    KernelSpec spec{g0.cells(), 1, {alpha / (g0.dx * g0.dx)}};
    const auto expect = heat_operator_space(spec, T, g0.z);
    std::vector<double> mc(g0.cells(), 0.0);
    for (const auto& f : fields)
        for (int i = 0; i < g0.cells(); ++i) mc[i] += f[i] / fields.size();
    double sxy = 0, sxx = 0, sx = 0, sy = 0;
    const int n = g0.cells();
    for (int i = 0; i < n; ++i) {
        sx += expect[i];
        sy += mc[i];
        sxx += expect[i] * expect[i];
        sxy += expect[i] * mc[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    // refinement consistency of the one-point variance
    MomentSummary coarse, fine;
    for (int pass = 0; pass < 2; ++pass) {
        const double dx = pass == 0 ? 0.1 : 0.05;
        SheGrid flat = make_she_grid(4.0, dx, alpha, lambda);
        const auto reps = she_solve(flat, T, 2000, 77, nullptr);
        std::vector<double> samples(reps.size());
        for (size_t r = 0; r < reps.size(); ++r) samples[r] = reps[r][flat.origin_cell()];
        (pass == 0 ? coarse : fine) = summarize(samples);
    }
    const double sd = std::sqrt(coarse.var * coarse.var * 2.0 / (coarse.n - 1) +
                                fine.var * fine.var * 2.0 / (fine.n - 1));
    const bool refine_ok = std::abs(coarse.var - fine.var) <= 3.0 * std::sqrt(sd);

    detail = "slope " + std::to_string(slope) + ", clamps " + std::to_string(clamps) +
             ", var " + std::to_string(coarse.var) + " vs " + std::to_string(fine.var);
    return std::abs(slope - 1.0) <= 0.02 && clamps == 0 && refine_ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    const std::vector<Criterion> criteria = {
        {1, "specialized-asymmetry identity", criterion_mean_invariance},
        {2, "exact stationarity of product measures", criterion_stationarity},
        {3, "height/Gartner consistency over 1e6 events", criterion_height_consistency},
        {4, "heat kernel exactness", criterion_heat_kernel},
        {5, "Kipnis-Varadhan constant", criterion_kv},
        {6, "disjoint-support averaging", criterion_disjoint},
        {7, "Azuma tails by enumeration", criterion_azuma},
        {8, "diffusive gap and LSI bands", criterion_gap_lsi},
        {9, "entropy production analogue", criterion_entropy_production},
        {10, "localization coupling", criterion_coupling},
        {11, "time-regularity exponent", criterion_holder},
        {12, "multiscale decay", criterion_schedule_decay},
        {13, "universality trend vs SHE", criterion_kpz_compare},
        {14, "SHE solver sanity", criterion_she},
    };

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.index != only) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %02d [%s] %s — %s (%.1fs)\n", c.index, ok ? "pass" : "FAIL",
                    c.label, detail.c_str(), secs);
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
