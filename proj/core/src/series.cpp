#include "glab/series.hpp"

#include <algorithm>
#include <cmath>

namespace glab {

namespace {
// Index of the segment containing t (last i with times[i] <= t).
int segment_index(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return std::max<int>(0, static_cast<int>(it - times.begin()) - 1);
}
}  // namespace

double StepSeries::value_at(double t) const {
    if (times.empty()) throw std::runtime_error("StepSeries: empty");
    return values[segment_index(times, t)];
}

double StepSeries::integral(double a, double b) const {
    if (b <= a) return 0.0;
    if (!covers(a, b)) throw std::runtime_error("StepSeries: window not covered");
    const int first = segment_index(times, a);
    double acc = 0.0;
    double left = a;
    for (size_t i = first; i < times.size(); ++i) {
        const double right = (i + 1 < times.size()) ? std::min(times[i + 1], b) : b;
        if (right > left) acc += values[i] * (right - left);
        left = right;
        if (left >= b) break;
    }
    return acc;
}

double time_average(const StepSeries& series, double t, double tau) {
    if (tau < 0.0) throw std::invalid_argument("time_average: negative window");
    if (tau == 0.0) return series.value_at(t);
    if (!series.covers(t, t + tau)) throw std::runtime_error("time_average: insufficient horizon");
    return series.integral(t, t + tau) / tau;
}

double running_weighted_sup(const StepSeries& series, double t, double tau) {
    if (tau <= 0.0) return 0.0;
    if (!series.covers(t, t + tau))
        throw std::runtime_error("running_weighted_sup: insufficient horizon");
    // (s/tau)|A_s| = |I(s)|/tau with I piecewise linear; extremes sit at
    // breakpoints and at s = tau.
    const int first = segment_index(series.times, t);
    double acc = 0.0;
    double sup = 0.0;
    double left = t;
    for (size_t i = first; i < series.times.size(); ++i) {
        const double right =
            (i + 1 < series.times.size()) ? std::min(series.times[i + 1], t + tau) : t + tau;
        if (right > left) {
            acc += series.values[i] * (right - left);
            sup = std::max(sup, std::abs(acc));
        }
        left = right;
        if (left >= t + tau) break;
    }
    return sup / tau;
}

double cutoff_time_average(const StepSeries& series, double t, const TimeAverageCutoff& cut,
                           int scale) {
    const double n = static_cast<double>(scale);
    const double upper = cut.upper_constant * std::pow(n, -cut.beta_minus);
    const double lower = std::pow(n, -cut.beta_plus);
    const double t_avg = cut.variant == 1 ? t + cut.t_shift : t;
    const double t_trig = cut.variant == 1 ? t : t + cut.t_shift;
    const double avg = time_average(series, t_avg, cut.tau);
    if (running_weighted_sup(series, t_avg, cut.tau) > upper) return 0.0;
    if (running_weighted_sup(series, t_trig, cut.tau) < lower) return 0.0;
    return avg;
}

}  // namespace glab
