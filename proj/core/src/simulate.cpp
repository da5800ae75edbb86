#include "glab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace glab {

void RateTree::set(int i, double rate) {
    const double delta = rate - rates_[i];
    if (delta == 0.0) return;
    rates_[i] = rate;
    total_ += delta;
    for (int j = i + 1; j <= n_; j += j & -j) tree_[j] += delta;
}

int RateTree::sample(double u) const {
    int pos = 0;
    int mask = 1;
    while ((mask << 1) <= n_) mask <<= 1;
    for (; mask > 0; mask >>= 1) {
        const int next = pos + mask;
        if (next <= n_ && tree_[next] < u) {
            u -= tree_[next];
            pos = next;
        }
    }
    pos = std::min(pos, n_ - 1);
    // A boundary draw can land on a dead channel; step to a live one.
    if (rates_[pos] == 0.0) {
        for (int i = pos - 1; i >= 0; --i)
            if (rates_[i] > 0.0) return i;
        for (int i = pos + 1; i < n_; ++i)
            if (rates_[i] > 0.0) return i;
    }
    return pos;
}

Simulator::Simulator(const ModelParams& params, SpinConfig initial, uint64_t seed)
    : params_(params),
      config_(std::move(initial)),
      m_(params.max_range()),
      length_(config_.size()),
      rates_(config_.size() * params.max_range()),
      rng_(make_rng(seed)) {
    require_valid(params_);
    if (config_.geometry.size != params_.geometry.size ||
        config_.geometry.kind != params_.geometry.kind)
        throw std::invalid_argument("simulate: config geometry does not match params");
    const double top = static_cast<double>(params_.scale) * params_.scale * length_ * m_;
    if (!(top < 1e300)) throw std::overflow_error("simulate: clock rate overflow");
    for (int x = 0; x < length_; ++x)
        for (int k = 1; k <= m_; ++k)
            rates_.set(channel_id(x, k), channel_rate(x, k));
}

double Simulator::channel_rate(int x_idx, int k) const {
    if (!config_.geometry.is_torus() && x_idx + k >= length_) return 0.0;  // bond does not exist
    const int8_t sx = config_.spins[x_idx];
    const int8_t sxk = config_.spins[config_.wrap(x_idx + k)];
    return jump_rate_spins(params_, k, sx, sxk);
}

void Simulator::refresh_around(int x_idx) {
    // Channels whose rate reads site x_idx: (x_idx, k) and (x_idx - k, k).
    for (int k = 1; k <= m_; ++k) {
        rates_.set(channel_id(x_idx, k), channel_rate(x_idx, k));
        int left = x_idx - k;
        if (config_.geometry.is_torus())
            left = config_.wrap(left);
        else if (left < 0)
            continue;
        rates_.set(channel_id(left, k), channel_rate(left, k));
    }
}

bool Simulator::crosses_marked_edge(int x_idx, int k) const {
    // Marked edge sits between labels 0 and 1. The bond covers edges
    // (x, x+1), ..., (x+k-1, x+k) in label space.
    const int x_label = config_.label_of_index(x_idx);
    if (config_.geometry.is_torus()) {
        // Crossing iff some j in [x+1, x+k] is congruent to 1 mod L.
        const int L = length_;
        const int r = ((1 - (x_label + 1)) % L + L) % L;  // steps from x+1 up to the cut label
        return r <= k - 1;
    }
    return x_label <= 0 && x_label + k > 0;
}

JumpEvent Simulator::commit_event() {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int c = rates_.sample(u01(rng_) * rates_.total());
    const int x_idx = c / m_;
    const int k = c % m_ + 1;
    const int y_idx = config_.wrap(x_idx + k);

    JumpEvent ev;
    ev.time = time_;
    ev.x = config_.label_of_index(x_idx);
    ev.k = k;
    const int8_t sx = config_.spins[x_idx];
    const int8_t sy = config_.spins[y_idx];
    if (sx == sy) {
        ev.executed = false;
        ev.direction = JumpDirection::Neutral;
    } else {
        ev.executed = true;
        ev.direction = sx == 1 ? JumpDirection::Right : JumpDirection::Left;
        config_.spins[x_idx] = sy;
        config_.spins[y_idx] = sx;
        if (crosses_marked_edge(x_idx, k))
            flux_left_ += ev.direction == JumpDirection::Left ? 1 : -1;
        refresh_around(x_idx);
        refresh_around(y_idx);
    }
    ++events_;
    return ev;
}

JumpEvent Simulator::step() {
    const double total = rates_.total();
    if (!(total > 0.0)) throw std::runtime_error("step: no channel has positive rate");
    std::exponential_distribution<double> exp_dist(total);
    time_ += exp_dist(rng_);
    return commit_event();
}

void Simulator::run_until(double t, const std::function<void(const JumpEvent&)>& sink) {
    while (true) {
        const double total = rates_.total();
        if (!(total > 0.0)) {
            time_ = t;
            return;
        }
        std::exponential_distribution<double> exp_dist(total);
        const double wait = exp_dist(rng_);
        if (time_ + wait > t) {
            // Discarding the partial wait is exact by memorylessness.
            time_ = t;
            return;
        }
        time_ += wait;
        const JumpEvent ev = commit_event();
        if (sink) sink(ev);
    }
}

Trajectory simulate(const ModelParams& params, const SpinConfig& initial, double horizon,
                    uint64_t seed) {
    if (horizon < 0.0) throw std::invalid_argument("simulate: negative horizon");
    Simulator sim(params, initial, seed);
    Trajectory t;
    t.initial = initial;
    t.horizon = horizon;
    t.rng_seed = seed;
    sim.run_until(horizon, [&t](const JumpEvent& ev) { t.events.push_back(ev); });
    t.final = sim.config();
    return t;
}

SpinConfig replay(const Trajectory& trajectory) {
    SpinConfig c = trajectory.initial;
    for (const JumpEvent& ev : trajectory.events) {
        if (!ev.executed) continue;
        const int a = c.index_of_label(ev.x);
        const int b = c.index_of_label(ev.x + ev.k);
        std::swap(c.spins[a], c.spins[b]);
    }
    return c;
}

void write_events_csv(const Trajectory& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "time,x,k,executed,direction\n";
    char buf[96];
    for (const JumpEvent& ev : t.events) {
        const char* dir = ev.direction == JumpDirection::Right  ? "right"
                          : ev.direction == JumpDirection::Left ? "left"
                                                                : "neutral";
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%d,%s\n", ev.time, ev.x, ev.k,
                      ev.executed ? 1 : 0, dir);
        out << buf;
    }
}

namespace {
constexpr char kJournalMagic[8] = {'G', 'L', 'A', 'B', 'J', 'R', 'N', 'L'};
constexpr uint32_t kJournalVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void write_journal(const Trajectory& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(kJournalMagic, 8);
    put<uint32_t>(out, kJournalVersion);
    put<uint32_t>(out, t.initial.geometry.is_torus() ? 1 : 0);
    put<int32_t>(out, t.initial.size());
    put<uint64_t>(out, t.rng_seed);
    put<double>(out, t.horizon);
    put<uint64_t>(out, t.events.size());
    for (int8_t s : t.initial.spins) put<int8_t>(out, s);
    for (const JumpEvent& ev : t.events) {
        put<double>(out, ev.time);
        put<int32_t>(out, ev.x);
        put<int16_t>(out, static_cast<int16_t>(ev.k));
        put<uint8_t>(out, ev.executed ? 1 : 0);
        put<uint8_t>(out, static_cast<uint8_t>(ev.direction));
    }
}

Trajectory read_journal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kJournalMagic, 8) != 0)
        throw std::runtime_error("not a journal file: " + path);
    if (take<uint32_t>(in) != kJournalVersion) throw std::runtime_error("journal version mismatch");
    const bool torus = take<uint32_t>(in) == 1;
    const int32_t size = take<int32_t>(in);
    Trajectory t;
    t.rng_seed = take<uint64_t>(in);
    t.horizon = take<double>(in);
    const uint64_t n = take<uint64_t>(in);
    t.initial.geometry = torus ? Geometry::torus(size) : Geometry::segment((size - 1) / 2);
    t.initial.spins.resize(size);
    for (auto& s : t.initial.spins) s = take<int8_t>(in);
    t.events.resize(n);
    for (auto& ev : t.events) {
        ev.time = take<double>(in);
        ev.x = take<int32_t>(in);
        ev.k = take<int16_t>(in);
        ev.executed = take<uint8_t>(in) == 1;
        ev.direction = static_cast<JumpDirection>(take<uint8_t>(in));
    }
    if (!in) throw std::runtime_error("journal truncated: " + path);
    t.final = replay(t);
    return t;
}

}  // namespace glab
