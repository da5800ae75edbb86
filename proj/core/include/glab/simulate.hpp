#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glab/model.hpp"
#include "glab/rng.hpp"
#include "glab/spin.hpp"

namespace glab {

enum class JumpDirection : uint8_t { Right = 0, Left = 1, Neutral = 2 };

// One clock firing. `x` is the left site label of the bond (x, x+k);
// `executed` is false when the swap was a no-op (equal spins).
struct JumpEvent {
    double time = 0.0;
    int32_t x = 0;
    int32_t k = 0;
    bool executed = false;
    JumpDirection direction = JumpDirection::Neutral;
};

struct Trajectory {
    SpinConfig initial;
    std::vector<JumpEvent> events;
    double horizon = 0.0;
    uint64_t rng_seed = 0;
    SpinConfig final;
};

// Fenwick tree over channel rates; supports O(log n) prefix sampling.
class RateTree {
  public:
    explicit RateTree(int n = 0) { reset(n); }
    void reset(int n) {
        n_ = n;
        tree_.assign(n + 1, 0.0);
        rates_.assign(n, 0.0);
    }
    void set(int i, double rate);
    double get(int i) const { return rates_[i]; }
    double total() const { return total_; }
    // Largest index i with prefix(i) <= u < prefix(i+1).
    int sample(double u) const;

  private:
    int n_ = 0;
    std::vector<double> tree_;
    std::vector<double> rates_;
    double total_ = 0.0;
};

// Exact continuous-time simulation: every bond channel (x,k) carries an
// exponential clock at its current jump_rate; next-event selection is exact.
// Rates are refreshed incrementally, O(m log(Lm)) per event.
class Simulator {
  public:
    Simulator(const ModelParams& params, SpinConfig initial, uint64_t seed);

    // Advance by one clock firing; returns the event.
    JumpEvent step();
    // Run until process time `t`; invokes `sink` per event when non-null.
    void run_until(double t, const std::function<void(const JumpEvent&)>& sink = nullptr);

    double time() const { return time_; }
    const SpinConfig& config() const { return config_; }
    const ModelParams& params() const { return params_; }
    double total_rate() const { return rates_.total(); }
    uint64_t events_seen() const { return events_; }
    // Net particle flux across the marked edge (0,1), leftward positive.
    int64_t flux_left() const { return flux_left_; }
    Rng& rng() { return rng_; }

  private:
    int channel_id(int x_idx, int k) const { return x_idx * m_ + (k - 1); }
    double channel_rate(int x_idx, int k) const;
    void refresh_around(int x_idx);
    bool crosses_marked_edge(int x_idx, int k) const;
    JumpEvent commit_event();

    ModelParams params_;
    SpinConfig config_;
    int m_;
    int length_;
    RateTree rates_;
    Rng rng_;
    double time_ = 0.0;
    uint64_t events_ = 0;
    int64_t flux_left_ = 0;
};

// Full-log simulation with the final configuration attached.
Trajectory simulate(const ModelParams& params, const SpinConfig& initial, double horizon,
                    uint64_t seed);

// Deterministic replay of a recorded event log from the stored initial state.
SpinConfig replay(const Trajectory& trajectory);

// Event log export: CSV (time,x,k,executed,direction) and a fixed-width
// little-endian binary journal (see README for the layout).
void write_events_csv(const Trajectory& t, const std::string& path);
void write_journal(const Trajectory& t, const std::string& path);
Trajectory read_journal(const std::string& path);

}  // namespace glab
