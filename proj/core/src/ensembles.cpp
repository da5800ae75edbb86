#include "glab/ensembles.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "glab/rng.hpp"

namespace glab {

EnsembleSpec canonical_ensemble(int sites, int particles) {
    EnsembleSpec e;
    e.kind = EnsembleSpec::Kind::Canonical;
    e.sites = sites;
    e.rho = (2.0 * particles - sites) / sites;
    e.space = hyperplane(sites, particles);
    e.weights = Eigen::VectorXd::Constant(e.space.size(), 1.0 / e.space.size());
    return e;
}

EnsembleSpec canonical_ensemble_rho(int sites, double rho) {
    int particles = 0;
    if (!hyperplane_feasible(sites, rho, &particles))
        throw std::invalid_argument("canonical_ensemble_rho: infeasible density");
    return canonical_ensemble(sites, particles);
}

EnsembleSpec grand_ensemble(int sites, double rho) {
    EnsembleSpec e;
    e.kind = EnsembleSpec::Kind::Grand;
    e.sites = sites;
    e.rho = rho;
    e.space = full_space(sites);
    const LawVector law = product_bernoulli_law(e.space, rho);
    e.weights = law.p;
    return e;
}

std::vector<uint32_t> enumerate_hyperplane(int sites, double rho) {
    int particles = 0;
    if (!hyperplane_feasible(sites, rho, &particles))
        throw std::invalid_argument("enumerate_hyperplane: infeasible density");
    return hyperplane(sites, particles).states;
}

Eigen::VectorXd evaluate_on_space(const LocalFunctional& f, const StateSpace& space, int shift) {
    const int lo = f.base + shift;
    if (lo < 0 || lo + f.width > space.sites)
        throw std::invalid_argument("evaluate_on_space: window leaves the block");
    Eigen::VectorXd out(space.size());
    const uint32_t window_mask = (1u << f.width) - 1;
    for (int i = 0; i < space.size(); ++i)
        out[i] = f.at_bits((space.states[i] >> lo) & window_mask);
    return out;
}

double relative_entropy(const Eigen::VectorXd& density, const EnsembleSpec& ensemble) {
    if (density.size() != ensemble.weights.size())
        throw std::invalid_argument("relative_entropy: size mismatch");
    double h = 0.0;
    for (int i = 0; i < density.size(); ++i) {
        const double f = density[i];
        if (f < -1e-12) throw std::invalid_argument("relative_entropy: negative density");
        if (f > 0.0) h += ensemble.weights[i] * f * std::log(f);
    }
    return h;
}

double dirichlet_form(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                      const std::vector<double>& alpha) {
    const StateSpace& space = ensemble.space;
    const int n = space.sites;
    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd root = density.cwiseMax(0.0).cwiseSqrt();
    double d = 0.0;
    for (int i = 0; i < space.size(); ++i) {
        const uint32_t mask = space.states[i];
        for (int x = 0; x < n; ++x) {
            for (int k = 1; k <= m && x + k < n; ++k) {
                const int y = x + k;
                if (((mask >> x) & 1u) == ((mask >> y) & 1u)) continue;
                const int j = space.index(mask ^ (1u << x) ^ (1u << y));
                if (j < 0) continue;
                const double diff = root[j] - root[i];
                d += 0.5 * alpha[k - 1] * ensemble.weights[i] * diff * diff;
            }
        }
    }
    return d;
}

double lsi_ratio(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                 const std::vector<double>& alpha) {
    const double h = relative_entropy(density, ensemble);
    const double d = dirichlet_form(density, ensemble, alpha);
    if (d <= 1e-15) {
        if (h <= 1e-12) return 0.0;
        throw std::logic_error("lsi_ratio: H > 0 with D = 0 on a connected hyperplane");
    }
    return h / (static_cast<double>(ensemble.sites) * ensemble.sites * d);
}

GapTable spectral_gap(int size_lo, int size_hi, const std::vector<double>& alpha) {
    GapTable table;
    for (int n = size_lo; n <= size_hi; ++n) {
        const EnsembleSpec ens = canonical_ensemble(n, n / 2);
        const GeneratorMatrix sbar = build_symmetric_part(alpha, ens.space, /*scaled=*/false);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-sbar.dense());
        const double gap = es.eigenvalues()[1];
        table.sizes.push_back(n);
        table.gaps.push_back(gap);
        table.gaps_scaled.push_back(gap * n * n);
    }
    return table;
}

namespace {
// Symmetric PSD pseudo-inverse action in the mu-weighted inner product:
// value = <phi, M^+ phi>_mu for M = -Sbar (symmetric w.r.t. mu).
struct WeightedPseudoInverse {
    Eigen::MatrixXd vectors;  // eigenvectors of D^{1/2} M D^{-1/2}
    Eigen::VectorXd values;
    Eigen::VectorXd root_w;

    explicit WeightedPseudoInverse(const Eigen::MatrixXd& m_neg, const Eigen::VectorXd& weights) {
        root_w = weights.cwiseSqrt();
        Eigen::MatrixXd sym = root_w.asDiagonal() * m_neg * root_w.cwiseInverse().asDiagonal();
        sym = 0.5 * (sym + sym.transpose());  // kill roundoff asymmetry
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        vectors = es.eigenvectors();
        values = es.eigenvalues();
    }

    double quad(const Eigen::VectorXd& phi) const {
        const double cutoff = 1e-10 * std::max(1.0, values.cwiseAbs().maxCoeff());
        const Eigen::VectorXd proj = vectors.transpose() * root_w.cwiseProduct(phi);
        double acc = 0.0;
        for (int i = 0; i < values.size(); ++i)
            if (values[i] > cutoff) acc += proj[i] * proj[i] / values[i];
        return acc;
    }
};
}  // namespace

HMinusOneResult h_minus_one_norm(const Eigen::VectorXd& phi, const EnsembleSpec& ensemble,
                                 const GeneratorMatrix& sbar, int random_witnesses,
                                 uint64_t seed) {
    HMinusOneResult r;
    const double mean = ensemble.mean(phi);
    if (std::abs(mean) > 1e-9 * std::max(1.0, phi.cwiseAbs().maxCoeff())) {
        r.mean_zero = false;
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    const Eigen::MatrixXd m_neg = -sbar.dense();
    WeightedPseudoInverse pinv(m_neg, ensemble.weights);
    r.value = pinv.quad(phi);

    // Lower bound: maximize 2 E[phi psi] - E[psi (-Sbar) psi] over the span of
    // random witnesses (a subspace optimum, hence a valid lower bound).
    const int n = static_cast<int>(phi.size());
    const int r_dim = std::min(random_witnesses, n);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd psi(n, r_dim);
    for (int j = 0; j < r_dim; ++j)
        for (int i = 0; i < n; ++i) psi(i, j) = gauss(rng);
    const Eigen::MatrixXd wd = ensemble.weights.asDiagonal();
    const Eigen::MatrixXd a = psi.transpose() * wd * m_neg * psi;
    const Eigen::VectorXd b = psi.transpose() * wd * phi;
    const Eigen::VectorXd c =
        (0.5 * (a + a.transpose())).completeOrthogonalDecomposition().solve(b);
    r.variational_lower_bound = 2.0 * b.dot(c) - c.dot(0.5 * (a + a.transpose()) * c);
    return r;
}

KvSolver::KvSolver(const GeneratorMatrix& generator, const EnsembleSpec& ensemble)
    : mu_(ensemble.weights) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(generator.dense());
    if (es.info() != Eigen::Success) throw std::runtime_error("KvSolver: eigensolve failed");
    v_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    v_inv_ = v_.inverse();
}

namespace {
// (2/tau^2) int_0^tau (tau - s) e^{lambda s} ds.
std::complex<double> kv_weight(std::complex<double> lambda, double tau) {
    const std::complex<double> z = lambda * tau;
    if (std::abs(z) < 1e-6) {
        // series of 2(e^z - 1 - z)/z^2
        return 1.0 + z / 3.0 + z * z / 12.0 + z * z * z / 60.0;
    }
    return 2.0 * (std::exp(z) - 1.0 - z) / (z * z);
}
}  // namespace

double KvSolver::lhs(const Eigen::VectorXd& phi, double tau) const {
    if (tau <= 0.0) {
        // tau -> 0 limit is E[phi^2].
        return mu_.dot(phi.cwiseProduct(phi));
    }
    const Eigen::VectorXcd a = v_.transpose() * mu_.cwiseProduct(phi).cast<std::complex<double>>();
    const Eigen::VectorXcd b = v_inv_ * phi.cast<std::complex<double>>();
    std::complex<double> acc = 0.0;
    for (int j = 0; j < lambda_.size(); ++j) acc += a[j] * b[j] * kv_weight(lambda_[j], tau);
    return acc.real();
}

double kv_lhs_exact(const Eigen::VectorXd& phi, double tau, const GeneratorMatrix& generator,
                    const EnsembleSpec& ensemble) {
    return KvSolver(generator, ensemble).lhs(phi, tau);
}

DisjointAverageReport disjoint_average_bound_check(const LocalFunctional& g,
                                                   const std::vector<int>& shifts, int sites,
                                                   const std::vector<double>& alpha) {
    DisjointAverageReport report;
    const int J = static_cast<int>(shifts.size());
    report.count_j = J;
    for (int a = 0; a < J; ++a)
        for (int b = a + 1; b < J; ++b)
            if (!g.supports_disjoint(g, shifts[a], shifts[b]))
                throw std::invalid_argument("disjoint_average_bound_check: overlapping supports");

    double avg_norm_sup = 0.0;
    double per_phi_sup = 0.0;  // sup_rho ||phi_j||^2, identical for all j by translation invariance
    report.worst_support_ratio = 0.0;
    double pgf_sup = 0.0, pgf_base_sup = 0.0;

    // Pseudo-gradient factor probe: g times a disjoint product of two spins.
    LocalFunctional probe = spin_pair(0, 1);

    for (int particles = 0; particles <= sites; ++particles) {
        const EnsembleSpec ens = canonical_ensemble(sites, particles);
        const GeneratorMatrix sbar = build_symmetric_part(alpha, ens.space, /*scaled=*/false);

        Eigen::VectorXd avg = Eigen::VectorXd::Zero(ens.space.size());
        for (int j = 0; j < J; ++j) avg += evaluate_on_space(g, ens.space, shifts[j]);
        avg /= J;
        const Eigen::VectorXd phi0 = evaluate_on_space(g, ens.space, shifts[0]);

        const Eigen::MatrixXd m_neg = -sbar.dense();
        WeightedPseudoInverse pinv(m_neg, ens.weights);
        avg_norm_sup = std::max(avg_norm_sup, pinv.quad(avg));
        const double phi_norm = pinv.quad(phi0);
        per_phi_sup = std::max(per_phi_sup, phi_norm);

        double phi_l2 = ens.mean(phi0.cwiseProduct(phi0));
        if (phi_l2 > 0.0)
            report.worst_support_ratio =
                std::max(report.worst_support_ratio,
                         phi_norm / (static_cast<double>(g.width) * g.width * phi_l2));

        // ||g . f||_{-1} vs ||g||_{-1} (f supported after the last translate).
        const int probe_shift = shifts[0] + g.base + g.width + 1 - probe.base;
        if (probe_shift + probe.base >= 0 && probe_shift + probe.base + probe.width <= sites) {
            const Eigen::VectorXd f = evaluate_on_space(probe, ens.space, probe_shift);
            pgf_sup = std::max(pgf_sup, pinv.quad(phi0.cwiseProduct(f)));
            pgf_base_sup = std::max(pgf_base_sup, phi_norm);
        }
    }
    report.avg_norm = avg_norm_sup;
    report.bound = per_phi_sup / J;
    report.ratio = report.bound > 0.0 ? report.avg_norm / report.bound : 0.0;
    report.pgf_ratio = pgf_base_sup > 0.0 ? pgf_sup / pgf_base_sup : 0.0;
    return report;
}

AzumaReport azuma_tail_check(const LocalFunctional& g, const std::vector<int>& shifts, int sites,
                             double rho, const std::vector<double>& c_grid) {
    AzumaReport report;
    const int J = static_cast<int>(shifts.size());
    report.count_j = J;
    report.sup_bound = g.sup_norm();
    const EnsembleSpec ens = canonical_ensemble_rho(sites, rho);
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(ens.space.size());
    for (int j = 0; j < J; ++j) avg += evaluate_on_space(g, ens.space, shifts[j]);
    avg /= J;

    report.all_within = true;
    for (double c : c_grid) {
        AzumaReport::Row row;
        row.c = c;
        for (int i = 0; i < ens.space.size(); ++i)
            if (std::abs(avg[i]) >= c) row.tail += ens.weights[i];
        row.bound =
            2.0 * std::exp(-J * c * c / (2.0 * report.sup_bound * report.sup_bound));
        if (row.tail > row.bound + 1e-12) report.all_within = false;
        report.rows.push_back(row);
    }
    return report;
}

Eigen::VectorXd project_density(const Eigen::VectorXd& density, const EnsembleSpec& ensemble,
                                int block_lo, int block_width) {
    if (block_lo < 0 || block_lo + block_width > ensemble.sites)
        throw std::invalid_argument("project_density: block out of range");
    const uint32_t block_mask = (1u << block_width) - 1;
    Eigen::VectorXd num = Eigen::VectorXd::Zero(1u << block_width);
    Eigen::VectorXd den = Eigen::VectorXd::Zero(1u << block_width);
    for (int i = 0; i < ensemble.space.size(); ++i) {
        const uint32_t sigma = (ensemble.space.states[i] >> block_lo) & block_mask;
        num[sigma] += ensemble.weights[i] * density[i];
        den[sigma] += ensemble.weights[i];
    }
    Eigen::VectorXd out(1u << block_width);
    for (int s = 0; s < out.size(); ++s) out[s] = den[s] > 0.0 ? num[s] / den[s] : 0.0;
    return out;
}

EntropyProductionCurve entropy_production_trajectory(const ModelParams& params,
                                                     const Eigen::VectorXd& f0, double T,
                                                     int block_lo, int block_width,
                                                     double tol) {
    if (!params.geometry.is_torus())
        throw std::invalid_argument("entropy_production_trajectory: torus required");
    const int L = params.geometry.size;
    if (L > 10) throw std::invalid_argument("entropy_production_trajectory: L <= 10");
    const EnsembleSpec mu0 = grand_ensemble(L, 0.0);
    const EnsembleSpec block = grand_ensemble(block_width, 0.0);
    const GeneratorMatrix gen = build_generator(params, mu0.space, /*periodic=*/true);

    auto dirichlet_at = [&](const Eigen::VectorXd& f) {
        return dirichlet_form(project_density(f, mu0, block_lo, block_width), block, params.alpha);
    };

    EntropyProductionCurve curve;
    int points = 17;
    double previous = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 8; ++pass) {
        curve.times.assign(points, 0.0);
        curve.dirichlet.assign(points, 0.0);
        LawVector law{f0.cwiseProduct(mu0.weights)};
        const double dt = T / (points - 1);
        Eigen::VectorXd f = f0;
        for (int i = 0; i < points; ++i) {
            curve.times[i] = i * dt;
            curve.dirichlet[i] = dirichlet_at(f);
            if (i + 1 < points) {
                law = evolve_law_exact(gen, law, dt);
                f = law.p.cwiseQuotient(mu0.weights);
            }
        }
        double integral = 0.0;
        for (int i = 0; i + 1 < points; ++i)
            integral += 0.5 * dt * (curve.dirichlet[i] + curve.dirichlet[i + 1]);
        curve.integral = integral;
        if (std::abs(integral - previous) <= tol * std::max(1.0, std::abs(integral))) break;
        previous = integral;
        points = 2 * (points - 1) + 1;
    }
    return curve;
}

}  // namespace glab
