#include "glab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glab {

SopWindow sop_window(int scale, double tau, double t_shift, double beta_x, double log_factor) {
    const double n = static_cast<double>(scale);
    const double span = 2.0 * tau + 2.0 * t_shift;
    const double l = log_factor * (n * std::sqrt(span) + std::pow(n, 1.5) * span) +
                     log_factor * std::pow(n, beta_x);
    SopWindow w;
    w.window_radius = static_cast<int>(std::ceil(l));
    w.contamination_radius =
        static_cast<int>(std::ceil(std::sqrt(log_factor) * std::pow(n, beta_x)));
    return w;
}

int CoupledSimulator::b_index(int label) const {
    const int w = 2 * state_.window_radius + 1;
    int idx = (label - (state_.center - state_.window_radius)) % w;
    return idx < 0 ? idx + w : idx;
}

CoupledSimulator::CoupledSimulator(const ModelParams& params, int window_center,
                                   int window_radius, int ball_radius, const SpinConfig& initial,
                                   uint64_t seed)
    : params_(params), rng_(make_rng(seed)) {
    require_valid(params_);
    if (initial.geometry.is_torus())
        throw std::invalid_argument("coupled_simulate: species A lives on a segment");
    const int seg_radius = initial.geometry.origin();
    if (window_center - window_radius < -seg_radius ||
        window_center + window_radius > seg_radius)
        throw std::invalid_argument("coupled_simulate: window does not fit inside the segment");

    state_.species_a = initial;
    state_.center = window_center;
    state_.window_radius = window_radius;
    state_.ball_radius = ball_radius;
    const int w = 2 * window_radius + 1;
    state_.species_b = SpinConfig{Geometry::torus(w), std::vector<int8_t>(w)};
    for (int label = window_center - window_radius; label <= window_center + window_radius;
         ++label)
        state_.species_b.spins[b_index(label)] = initial.at_label(label);
    disc_bitmap_.assign(w, 0);

    const int m = params_.max_range();
    const double n2 = static_cast<double>(params_.scale) * params_.scale;
    const double root_n = std::sqrt(static_cast<double>(params_.scale));
    const int win_lo = window_center - window_radius;
    const int win_hi = window_center + window_radius;

    auto push = [&](const Channel& ch, double rate) {
        if (rate <= 0.0) return;
        channels_.push_back(ch);
        total_rate_ += rate;
        cumulative_.push_back(total_rate_);
    };

    for (int k = 1; k <= m; ++k) {
        const double tilt = params_.gamma[k - 1] / root_n;
        const double base = n2 * params_.alpha[k - 1] * std::min(1.0, 1.0 - tilt);
        const double residual = n2 * params_.alpha[k - 1] * std::abs(tilt);
        // Segment bonds; shared with B when both endpoints sit in the window.
        for (int x = -seg_radius; x + k <= seg_radius; ++x) {
            const bool in_b = x >= win_lo && x + k <= win_hi;
            push({x, k, false, true, in_b, false}, base);
            if (residual > 0.0) push({x, k, true, true, in_b, false}, residual);
        }
        // Species-B bonds through the periodic seam get their own clocks.
        for (int x = win_hi - k + 1; x <= win_hi; ++x) {
            push({x, k, false, false, true, true}, base);
            if (residual > 0.0) push({x, k, true, false, true, true}, residual);
        }
    }
}

void CoupledSimulator::flip_b(int label) {
    auto& s = state_.species_b.spins[b_index(label)];
    s = s == 1 ? -1 : 1;
    refresh_discrepancy(label);
}

void CoupledSimulator::refresh_discrepancy(int label) {
    if (label < state_.center - state_.window_radius ||
        label > state_.center + state_.window_radius)
        return;
    const bool differ =
        state_.species_a.at_label(label) != state_.species_b.spins[b_index(label)];
    const int idx = b_index(label);
    const int was = disc_bitmap_[idx];
    const int now = differ ? 1 : 0;
    if (was == now) return;
    disc_bitmap_[idx] = now;
    state_.discrepancies += now - was;
    if (std::abs(label - state_.center) <= state_.ball_radius) {
        state_.discrepancies_in_ball += now - was;
        if (now == 1 && state_.discrepancies_in_ball > 0 &&
            first_contamination_ == std::numeric_limits<double>::infinity())
            first_contamination_ = state_.time;
    }
}

void CoupledSimulator::apply(const Channel& ch) {
    const double root_n = std::sqrt(static_cast<double>(params_.scale));
    const double tilt = params_.gamma[ch.k - 1] / root_n;
    // Residual clocks act on the faster pattern: (particle, hole) when the
    // tilt suppresses leftward swaps, mirrored for negative tilt.
    const int8_t src = tilt >= 0.0 ? int8_t{1} : int8_t{-1};

    if (ch.in_a) {
        auto& a = state_.species_a;
        const int i = a.index_of_label(ch.x_label);
        const int j = a.index_of_label(ch.x_label + ch.k);
        const bool fire = !ch.residual || (a.spins[i] == src && a.spins[j] == -src);
        if (fire) std::swap(a.spins[i], a.spins[j]);
    }
    if (ch.in_b) {
        auto& b = state_.species_b;
        const int i = b_index(ch.x_label);
        const int j = b_index(ch.x_label + ch.k);
        const bool fire = !ch.residual || (b.spins[i] == src && b.spins[j] == -src);
        if (fire) std::swap(b.spins[i], b.spins[j]);
    }
    refresh_discrepancy(ch.x_label);
    // The wrapped endpoint label differs between species; refresh both images.
    refresh_discrepancy(ch.x_label + ch.k);
    if (ch.wrap)
        refresh_discrepancy(ch.x_label + ch.k - (2 * state_.window_radius + 1));
}

void CoupledSimulator::run_until(double t) {
    if (total_rate_ <= 0.0) {
        state_.time = t;
        return;
    }
    std::exponential_distribution<double> exp_dist(total_rate_);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    while (true) {
        const double wait = exp_dist(rng_);
        if (state_.time + wait > t) {
            state_.time = t;
            return;
        }
        state_.time += wait;
        const double u = u01(rng_) * total_rate_;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const size_t c = std::min<size_t>(it - cumulative_.begin(), channels_.size() - 1);
        const Channel& ch = channels_[c];
        if (!(ch.in_a && ch.in_b) && state_.time < first_unshared_)
            first_unshared_ = state_.time;
        apply(ch);
        ++events_;
    }
}

CoupledResult coupled_simulate(const ModelParams& params, int window_center, int window_radius,
                               int ball_radius, const SpinConfig& initial, double horizon,
                               uint64_t seed) {
    CoupledSimulator sim(params, window_center, window_radius, ball_radius, initial, seed);
    sim.run_until(horizon);
    return CoupledResult{sim.state(), sim.first_contamination_time(), sim.events_seen()};
}

int discrepancy_count(const CoupledState& state) {
    int count = 0;
    const int w = 2 * state.window_radius + 1;
    SpinConfig b = state.species_b;
    for (int label = state.center - state.window_radius; label <= state.center + state.window_radius;
         ++label) {
        int idx = (label - (state.center - state.window_radius)) % w;
        if (idx < 0) idx += w;
        if (state.species_a.at_label(label) != b.spins[idx]) ++count;
    }
    return count;
}

}  // namespace glab
