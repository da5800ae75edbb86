#pragma once

#include <stdexcept>
#include <vector>

namespace glab {

// Right-continuous piecewise-constant path: value values[i] on
// [times[i], times[i+1]), last value up to the horizon. times[0] is the start
// of the observation window.
struct StepSeries {
    std::vector<double> times;
    std::vector<double> values;
    double horizon = 0.0;

    void push(double t, double v) {
        times.push_back(t);
        values.push_back(v);
    }
    double value_at(double t) const;
    // Exact integral over [a, b] by piecewise-constant quadrature.
    double integral(double a, double b) const;
    bool covers(double a, double b) const {
        return !times.empty() && times.front() <= a + 1e-15 && b <= horizon + 1e-15;
    }
};

// Dynamic average over [t, t+tau]: tau^{-1} integral, exact.
double time_average(const StepSeries& series, double t, double tau);

// Cutoff family around the dynamic average. The running supremum
// sup_{0<=s<=tau} (s/tau)|A_s| is evaluated at event times and interval
// endpoints, exact for piecewise-constant paths. Variant 1 time-shifts the
// average and the upper cutoff; variant 2 time-shifts the lower trigger.
struct TimeAverageCutoff {
    double tau = 0.0;
    double beta_plus = 0.0;       // lower trigger level N^{-beta_plus}
    double beta_minus = 0.0;      // upper cutoff level c N^{-beta_minus}
    double upper_constant = 1.0;  // the paper-style "universal constant", configurable
    double t_shift = 0.0;
    int variant = 1;  // irrelevant when t_shift == 0
};

double cutoff_time_average(const StepSeries& series, double t, const TimeAverageCutoff& cut,
                           int scale);

// sup_{0<=s<=tau} (s/tau) |A_s phi| starting at t; exact.
double running_weighted_sup(const StepSeries& series, double t, double tau);

}  // namespace glab
