#include "glab/spin.hpp"

#include <stdexcept>

namespace glab {

SpinConfig make_all(const Geometry& g, int8_t value) {
    return SpinConfig{g, std::vector<int8_t>(g.size, value)};
}

SpinConfig make_flat(const Geometry& g) {
    SpinConfig c{g, std::vector<int8_t>(g.size, -1)};
    for (int i = 0; i < g.size; ++i) {
        const int label = c.label_of_index(i);
        c.spins[i] = (((label % 2) + 2) % 2 == 1) ? 1 : -1;
    }
    return c;
}

SpinConfig make_narrow_wedge(const Geometry& g) {
    SpinConfig c{g, std::vector<int8_t>(g.size, -1)};
    for (int i = 0; i < g.size; ++i) c.spins[i] = c.label_of_index(i) > 0 ? 1 : -1;
    return c;
}

SpinConfig make_bernoulli(const Geometry& g, double rho, Rng& rng) {
    const double p_particle = 0.5 * (1.0 + rho);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SpinConfig c{g, std::vector<int8_t>(g.size)};
    for (auto& s : c.spins) s = u(rng) < p_particle ? 1 : -1;
    return c;
}

SpinConfig make_single_particle(const Geometry& g, int label) {
    SpinConfig c{g, std::vector<int8_t>(g.size, -1)};
    c.spins[c.index_of_label(label)] = 1;
    return c;
}

double jump_rate(const SpinConfig& config, int x_label, int k, const ModelParams& params) {
    if (!config.geometry.is_torus() &&
        (!config.in_segment(x_label) || !config.in_segment(x_label + k)))
        throw std::out_of_range("jump_rate: bond leaves the segment");
    const int8_t sx = config.at_label(x_label);
    const int8_t sxk = config.at_label(x_label + k);
    return jump_rate_spins(params, k, sx, sxk);
}

}  // namespace glab
