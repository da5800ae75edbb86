#include "glab/model.hpp"

#include <cmath>
#include <sstream>

namespace glab {

DerivedConstants derive_constants(const ModelParams& params) {
    const int m = params.max_range();
    DerivedConstants c;
    c.gamma_bar.assign(m, 0.0);
    c.gamma_bar_defined.assign(m, false);

    for (int k = 1; k <= m; ++k) {
        c.alpha_bar += static_cast<double>(k) * k * params.alpha[k - 1];
        c.alpha_prime += static_cast<double>(k) * params.alpha[k - 1] * params.gamma[k - 1];
    }
    c.lambda = (c.alpha_bar > 0.0) ? c.alpha_prime / c.alpha_bar : 0.0;

    for (int k = 1; k <= m; ++k) {
        if (params.alpha[k - 1] == 0.0) continue;  // only alpha_k*gamma_bar_k is defined there
        double tail = 0.0;
        for (int l = k; l <= m; ++l)
            tail += static_cast<double>(l - k) / k * params.alpha[l - 1];
        c.gamma_bar[k - 1] = (2.0 * c.lambda * tail + c.lambda * params.alpha[k - 1]) / params.alpha[k - 1];
        c.gamma_bar_defined[k - 1] = true;
    }
    return c;
}

double mean_invariance_residual(const ModelParams& params) {
    const DerivedConstants c = derive_constants(params);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 1; k <= params.max_range(); ++k) {
        lhs += k * params.alpha[k - 1] * params.gamma[k - 1];
        rhs += k * params.alpha[k - 1] * c.gamma_bar[k - 1];
    }
    return std::abs(lhs - rhs);
}

ValidationReport validate_params(const ModelParams& params) {
    ValidationReport r;
    const int m = params.max_range();

    r.coefficients_ok = m >= 1 && params.gamma.size() == params.alpha.size() && params.scale >= 1;
    if (r.coefficients_ok) {
        double sum = 0.0;
        for (double a : params.alpha) {
            if (a < 0.0) r.coefficients_ok = false;
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            r.coefficients_ok = false;
            r.messages.push_back("alpha weights must sum to 1");
        }
        if (params.alpha.empty() || params.alpha[0] <= 0.0) {
            r.coefficients_ok = false;
            r.messages.push_back("alpha_1 must be positive");
        }
    } else {
        r.messages.push_back("bad coefficient arrays");
    }

    r.rates_nonnegative = true;
    const double root_n = std::sqrt(static_cast<double>(params.scale));
    for (int k = 1; k <= m; ++k) {
        if (std::abs(params.gamma[k - 1]) / root_n > 1.0) {
            r.rates_nonnegative = false;
            std::ostringstream os;
            os << "negative rate: N^{-1/2}|gamma_" << k << "| = "
               << std::abs(params.gamma[k - 1]) / root_n << " > 1";
            r.messages.push_back(os.str());
        }
    }

    r.geometry_ok = params.geometry.size >= 2 * m + 1;
    if (!r.geometry_ok) r.messages.push_back("lattice too small: need size >= 2m+1");

    if (r.coefficients_ok) {
        const DerivedConstants c = derive_constants(params);
        for (int k = 1; k <= m; ++k)
            r.deviation.deviation +=
                k * params.alpha[k - 1] * std::abs(params.gamma[k - 1] - c.gamma_bar[k - 1]);
        r.deviation.threshold = params.assumption2_constant / root_n;
        if (!r.deviation.satisfied())
            r.messages.push_back("asymmetry deviation exceeds c*N^{-1/2} (not fatal)");
    }

    r.ok = r.coefficients_ok && r.rates_nonnegative && r.geometry_ok;
    return r;
}

void require_valid(const ModelParams& params) {
    const ValidationReport r = validate_params(params);
    if (!r.ok) {
        std::string what = "invalid model parameters";
        for (const auto& msg : r.messages) what += "; " + msg;
        throw std::invalid_argument(what);
    }
}

std::vector<double> specialize_gamma(const std::vector<double>& alpha, double lambda_target) {
    const int m = static_cast<int>(alpha.size());
    std::vector<double> gamma(m, 0.0);
    for (int k = 1; k <= m; ++k) {
        if (alpha[k - 1] == 0.0) continue;
        double tail = 0.0;
        for (int l = k; l <= m; ++l)
            tail += static_cast<double>(l - k) / k * alpha[l - 1];
        gamma[k - 1] = (2.0 * lambda_target * tail + lambda_target * alpha[k - 1]) / alpha[k - 1];
    }
    return gamma;
}

}  // namespace glab
