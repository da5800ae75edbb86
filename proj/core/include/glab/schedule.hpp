#pragma once

#include <string>
#include <vector>

namespace glab {

enum class ScheduleKind { D1B1a, D1B1b, D1B2a, D1B2b };

std::string to_string(ScheduleKind kind);

struct ScheduleEpsilons {
    double e1 = 0.02;  // enters beta_x = 1/3 + e1 and the spatial cutoff
    double e2 = 0.02;
    double e3 = 0.02;
    double e4 = 0.02;
    double e5 = 0.0;   // terminal-scale slack; derived when left at 0
};

// Multiscale time ladder. betas run beta_0..beta_{m_infinity}; taus carry one
// entry per refinement step (tau_1..tau_{m_infinity} for the D1B1 ladders,
// tau_0..tau_{l_infinity} for the geometric D1B2 ladders, terminal clamped to
// the companion D1B1 scale).
struct ScaleSchedule {
    ScheduleKind kind = ScheduleKind::D1B1a;
    int scale = 0;
    ScheduleEpsilons eps;
    double beta_x = 0.0;
    std::vector<double> betas;
    std::vector<double> taus;
    int m_infinity = 0;

    double terminal_tau() const { return taus.back(); }
    // Per-step ratio bound exponent: e3 for D1B1a, e2 otherwise.
    double ratio_exponent() const { return kind == ScheduleKind::D1B1a ? eps.e3 : eps.e2; }
};

struct ScheduleCheck {
    bool ratio_ok = false;     // 1 <= tau_m/tau_{m-1} <= N^{ratio exponent}
    bool terminal_ok = false;  // tau_{m_infinity} <= N^{-13/12 + e5}
    bool finite_ok = false;    // m_infinity >= 1 and N-independent construction
    double worst_ratio_exponent = 0.0;
    bool ok() const { return ratio_ok && terminal_ok && finite_ok; }
};

ScaleSchedule make_schedule(ScheduleKind kind, int scale, ScheduleEpsilons eps = {});
ScheduleCheck check_schedule(const ScaleSchedule& schedule);

}  // namespace glab
