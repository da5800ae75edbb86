#pragma once

#include <vector>

#include "glab/series.hpp"

namespace glab {

// Weighted space-time norms of a field trajectory, reduced to the path
// t -> sup_x |phi_{t,x}| (piecewise constant between events). The discrete
// kind evaluates the same event-time-exact supremum, which refines the
// N^{-100}-mesh grid it stands in for.
struct WeightedNorm {
    enum class Kind { Sup, Discrete, Nw };
    Kind kind = Kind::Sup;
    double eps_nw = 0.05;
    double horizon = 1.0;
};

double norm_eval(const StepSeries& sup_abs_path, const WeightedNorm& norm);

// Two-sample Kolmogorov-Smirnov statistic; both samples need >= 50 points.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Log-log slope of mean increments against tau; needs >= 4 grid points.
double holder_time_exponent(const std::vector<double>& taus,
                            const std::vector<double>& mean_sup_increments);

struct MomentSummary {
    double mean = 0.0;
    double var = 0.0;
    double sem = 0.0;  // standard error of the mean
    long n = 0;
};

MomentSummary summarize(const std::vector<double>& sample);

}  // namespace glab
