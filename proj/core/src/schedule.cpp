#include "glab/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace glab {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::D1B1a: return "D1B1a";
        case ScheduleKind::D1B1b: return "D1B1b";
        case ScheduleKind::D1B2a: return "D1B2a";
        case ScheduleKind::D1B2b: return "D1B2b";
    }
    return "?";
}

namespace {
double derived_e5(ScheduleKind kind, const ScheduleEpsilons& e) {
    // Worst-case slack of the terminal exponent past -13/12.
    switch (kind) {
        case ScheduleKind::D1B1a:
        case ScheduleKind::D1B2a:
            return std::max(1e-9, 2.5 * e.e3 + e.e4 - e.e1);
        case ScheduleKind::D1B1b:
        case ScheduleKind::D1B2b:
            return 0.5 * e.e1 + 2.5 * e.e2 + e.e3;
    }
    return 0.0;
}

ScaleSchedule refine_ladder(ScheduleKind kind, int scale, ScheduleEpsilons eps) {
    ScaleSchedule s;
    s.kind = kind;
    s.scale = scale;
    s.eps = eps;
    s.beta_x = 1.0 / 3.0 + eps.e1;
    const double n = static_cast<double>(scale);

    const bool variant_a = kind == ScheduleKind::D1B1a;
    const double beta0 = variant_a ? 0.5 * s.beta_x - eps.e2 : 0.0;
    const double step = variant_a ? eps.e3 : eps.e2;
    const double stop = variant_a ? 0.5 + 3.0 * eps.e3 : s.beta_x + 3.0 * eps.e2;
    if (step <= 0.0) throw std::invalid_argument("make_schedule: zero step never terminates");

    s.betas.push_back(beta0);
    while (s.betas.back() <= stop) {
        const double prev = s.betas.back();
        const double next = prev + step;
        s.betas.push_back(next);
        const double expo = variant_a ? -1.0 - s.beta_x - 0.5 * prev + next + eps.e4
                                      : -1.25 - 0.5 * prev + next + eps.e3;
        s.taus.push_back(std::pow(n, expo));
        if (s.betas.size() > 100000) throw std::runtime_error("make_schedule: runaway ladder");
    }
    s.m_infinity = static_cast<int>(s.taus.size());
    return s;
}
}  // namespace

ScaleSchedule make_schedule(ScheduleKind kind, int scale, ScheduleEpsilons eps) {
    if (scale < 2) throw std::invalid_argument("make_schedule: need N >= 2");
    if (eps.e1 <= 0 || eps.e2 <= 0 || eps.e3 <= 0 || eps.e4 <= 0)
        throw std::invalid_argument("make_schedule: epsilons must be positive");
    if (eps.e5 == 0.0) eps.e5 = derived_e5(kind, eps);

    if (kind == ScheduleKind::D1B1a || kind == ScheduleKind::D1B1b)
        return refine_ladder(kind, scale, eps);

    // Geometric ladders from the microscopic scale N^{-2} up to the terminal
    // scale of the companion refinement ladder.
    const ScheduleKind companion =
        kind == ScheduleKind::D1B2a ? ScheduleKind::D1B1a : ScheduleKind::D1B1b;
    const ScaleSchedule base = refine_ladder(companion, scale, eps);
    ScaleSchedule s;
    s.kind = kind;
    s.scale = scale;
    s.eps = eps;
    s.beta_x = base.beta_x;
    s.betas = base.betas;  // trigger levels of the companion ladder
    const double n = static_cast<double>(scale);
    const double terminal = base.terminal_tau();
    double tau = std::pow(n, -2.0);
    s.taus.push_back(tau);
    const double growth = std::pow(n, eps.e2);
    while (tau < terminal) {
        tau = std::min(tau * growth, terminal);
        s.taus.push_back(tau);
        if (s.taus.size() > 1000000) throw std::runtime_error("make_schedule: runaway ladder");
    }
    s.m_infinity = static_cast<int>(s.taus.size()) - 1;
    return s;
}

ScheduleCheck check_schedule(const ScaleSchedule& s) {
    ScheduleCheck c;
    const double n = static_cast<double>(s.scale);
    const double log_n = std::log(n);
    c.finite_ok = s.m_infinity >= 1 && !s.taus.empty();

    c.ratio_ok = true;
    const double bound = s.ratio_exponent();
    for (size_t i = 1; i < s.taus.size(); ++i) {
        const double expo = std::log(s.taus[i] / s.taus[i - 1]) / log_n;
        c.worst_ratio_exponent = std::max(c.worst_ratio_exponent, expo);
        if (expo < -1e-12 || expo > bound + 1e-12) c.ratio_ok = false;
    }

    c.terminal_ok = s.terminal_tau() <= std::pow(n, -13.0 / 12.0 + s.eps.e5) * (1.0 + 1e-12);
    return c;
}

}  // namespace glab
