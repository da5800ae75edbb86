#pragma once

#include <limits>
#include <vector>

#include "glab/model.hpp"
#include "glab/rng.hpp"
#include "glab/spin.hpp"

namespace glab {

// Window recipe for the localization coupling: radius of the periodic block
// adapted to a speed-N^2 walk with N^{3/2} drift over [0, 2 tau + 2 t_shift],
// with log^100 N replaced by a configurable desk-scale factor.
struct SopWindow {
    int window_radius = 0;         // l_tau
    int contamination_radius = 0;  // ball radius around the center
};

SopWindow sop_window(int scale, double tau, double t_shift, double beta_x,
                     double log_factor = 10.0);

// Two-species process: species A runs the segment dynamic, species B the
// window-periodic dynamic from the projected initial data. Symmetric bond
// clocks are shared (spin-swap coupling); the one-directional residual clocks
// of the asymmetry are basic-coupled on common bonds; clocks present in only
// one species are independent.
struct CoupledState {
    SpinConfig species_a;  // segment
    SpinConfig species_b;  // window, periodic
    int center = 0;
    int window_radius = 0;
    int ball_radius = 0;
    double time = 0.0;
    int discrepancies = 0;          // over the window
    int discrepancies_in_ball = 0;  // within the contamination ball
};

class CoupledSimulator {
  public:
    CoupledSimulator(const ModelParams& params, int window_center, int window_radius,
                     int ball_radius, const SpinConfig& initial, uint64_t seed);

    // Test hook: flip a species-B spin to seed a discrepancy.
    void flip_b(int label);

    void run_until(double t);
    const CoupledState& state() const { return state_; }
    double first_contamination_time() const { return first_contamination_; }
    // First firing of a clock not shared by both species (boundary or wrap).
    double first_unshared_event_time() const { return first_unshared_; }
    uint64_t events_seen() const { return events_; }

  private:
    struct Channel {
        int x_label;  // left endpoint (absolute label)
        int k;
        bool residual;  // one-directional asymmetric residual clock
        bool in_a;
        bool in_b;
        bool wrap;  // species-B bond through the periodic seam
    };

    void apply(const Channel& ch);
    void refresh_discrepancy(int label);
    int b_index(int label) const;

    ModelParams params_;
    CoupledState state_;
    std::vector<Channel> channels_;
    std::vector<double> cumulative_;
    std::vector<int> disc_bitmap_;  // per window site, 1 iff species disagree
    double total_rate_ = 0.0;
    Rng rng_;
    double first_contamination_ = std::numeric_limits<double>::infinity();
    double first_unshared_ = std::numeric_limits<double>::infinity();
    uint64_t events_ = 0;
};

struct CoupledResult {
    CoupledState final_state;
    double first_contamination_time = std::numeric_limits<double>::infinity();
    uint64_t events = 0;
};

CoupledResult coupled_simulate(const ModelParams& params, int window_center, int window_radius,
                               int ball_radius, const SpinConfig& initial, double horizon,
                               uint64_t seed);

int discrepancy_count(const CoupledState& state);

}  // namespace glab
