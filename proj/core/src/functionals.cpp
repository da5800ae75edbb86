#include "glab/functionals.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace glab {

double LocalFunctional::sup_norm() const {
    double s = 0.0;
    for (double v : table) s = std::max(s, std::abs(v));
    return s;
}

double LocalFunctional::eval(const SpinConfig& config, int x) const {
    uint32_t bits = 0;
    for (int i = 0; i < width; ++i)
        if (config.at_label(x + base + i) == 1) bits |= 1u << i;
    return table[bits];
}

bool LocalFunctional::supports_disjoint(const LocalFunctional& other, int shift_self,
                                        int shift_other) const {
    const int a0 = base + shift_self, a1 = a0 + width - 1;
    const int b0 = other.base + shift_other, b1 = b0 + other.width - 1;
    return a1 < b0 || b1 < a0;
}

LocalFunctional make_functional(const std::string& name, int base, int width,
                                const std::function<double(const int8_t*)>& fn) {
    if (width < 1 || width > 20) throw std::invalid_argument("make_functional: bad width");
    LocalFunctional f;
    f.name = name;
    f.base = base;
    f.width = width;
    f.table.resize(1u << width);
    std::vector<int8_t> spins(width);
    for (uint32_t bits = 0; bits < f.table.size(); ++bits) {
        for (int i = 0; i < width; ++i) spins[i] = (bits >> i) & 1u ? 1 : -1;
        f.table[bits] = fn(spins.data());
    }
    return f;
}

LocalFunctional spin_at(int a) {
    return make_functional("eta_" + std::to_string(a), a, 1,
                           [](const int8_t* s) { return static_cast<double>(s[0]); });
}

LocalFunctional spin_pair(int a, int b) {
    if (a == b) throw std::invalid_argument("spin_pair: coincident sites");
    const int lo = std::min(a, b), hi = std::max(a, b);
    return make_functional("eta_" + std::to_string(a) + "eta_" + std::to_string(b), lo,
                           hi - lo + 1, [lo, a, b](const int8_t* s) {
                               return static_cast<double>(s[a - lo]) * s[b - lo];
                           });
}

LocalFunctional subtract(const LocalFunctional& f, const LocalFunctional& g,
                         const std::string& name) {
    const int lo = std::min(f.base, g.base);
    const int hi = std::max(f.base + f.width, g.base + g.width) - 1;
    LocalFunctional out;
    out.name = name.empty() ? f.name + "-" + g.name : name;
    out.base = lo;
    out.width = hi - lo + 1;
    out.table.resize(1u << out.width);
    for (uint32_t bits = 0; bits < out.table.size(); ++bits) {
        const uint32_t fb = (bits >> (f.base - lo)) & ((1u << f.width) - 1);
        const uint32_t gb = (bits >> (g.base - lo)) & ((1u << g.width) - 1);
        out.table[bits] = f.table[fb] - g.table[gb];
    }
    return out;
}

LocalFunctional scale(const LocalFunctional& f, double c) {
    LocalFunctional out = f;
    for (auto& v : out.table) v *= c;
    return out;
}

bool is_pseudo_gradient(const LocalFunctional& g) {
    if (g.width > 12) throw std::invalid_argument("is_pseudo_gradient: support too large");
    // Mean over every hyperplane of the minimal covering interval.
    std::vector<double> sum(g.width + 1, 0.0);
    std::vector<double> count(g.width + 1, 0.0);
    for (uint32_t bits = 0; bits < g.table.size(); ++bits) {
        const int ones = std::popcount(bits);
        sum[ones] += g.table[bits];
        count[ones] += 1.0;
    }
    for (int p = 0; p <= g.width; ++p)
        if (std::abs(sum[p] / count[p]) > 1e-12) return false;
    return true;
}

bool is_weakly_vanishing(const LocalFunctional& w, int scale, double bound, double beta) {
    const double sup = w.sup_norm();
    if (sup <= std::pow(static_cast<double>(scale), -beta)) return true;
    if (sup > bound) return false;
    double mean = 0.0;
    for (double v : w.table) mean += v;
    return std::abs(mean / static_cast<double>(w.table.size())) <= 1e-12;
}

std::vector<LocalFunctional> builtin_pseudo_gradients() {
    std::vector<LocalFunctional> out;
    // Discrete gradients of spins and of spin products.
    for (int k = 1; k <= 3; ++k)
        out.push_back(subtract(spin_at(k), spin_at(0), "grad" + std::to_string(k)));
    out.push_back(subtract(spin_pair(1, 2), spin_pair(0, 1), "grad_pair"));
    // Exchangeability pairs: products over distinct sites share canonical means.
    out.push_back(subtract(spin_pair(0, 1), spin_pair(2, 3), "pair01-pair23"));
    out.push_back(subtract(spin_pair(0, 2), spin_pair(1, 3), "pair02-pair13"));
    out.push_back(subtract(spin_pair(0, 3), spin_pair(1, 2), "pair03-pair12"));
    out.push_back(subtract(spin_pair(0, 4), spin_pair(1, 2), "pair04-pair12"));
    // Triple products.
    auto triple = [](int a, int b, int c, int lo, int w) {
        return make_functional("t", lo, w, [=](const int8_t* s) {
            return static_cast<double>(s[a - lo]) * s[b - lo] * s[c - lo];
        });
    };
    out.push_back(subtract(triple(1, 2, 3, 0, 4), triple(0, 1, 2, 0, 4), "grad_triple"));
    out.push_back(subtract(triple(0, 1, 4, 0, 5), triple(1, 2, 3, 0, 5), "triple014-123"));
    for (auto& f : out) f.classification = FunctionalClass::PseudoGradient;
    return out;
}

double spatial_average(const LocalFunctional& g, const SpinConfig& config, int x, int count_j,
                       int max_range) {
    if (count_j < 1) throw std::invalid_argument("spatial_average: need J >= 1");
    const int stride = 3 * max_range;
    if (!config.geometry.is_torus()) {
        const int lo = x - count_j * stride + g.base;
        const int hi = x - stride + g.base + g.width - 1;
        if (!config.in_segment(lo) || !config.in_segment(hi))
            throw std::out_of_range("spatial_average: translate support leaves the lattice");
    }
    double acc = 0.0;
    for (int l = 1; l <= count_j; ++l) acc += g.eval(config, x - l * stride);
    return acc / count_j;
}

double cutoff_spatial(double value, int scale, double beta_x, double eps_x1) {
    const double threshold = std::pow(static_cast<double>(scale), -0.5 * beta_x + 0.5 * eps_x1);
    return std::abs(value) <= threshold ? value : 0.0;
}

}  // namespace glab
