#include "glab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glab/heat_kernel.hpp"

namespace glab {

double norm_eval(const StepSeries& path, const WeightedNorm& norm) {
    if (path.times.empty()) throw std::invalid_argument("norm_eval: empty path");
    const double t_end = std::min(norm.horizon, path.horizon);
    double sup = 0.0;
    for (size_t i = 0; i < path.times.size(); ++i) {
        const double left = path.times[i];
        if (left > t_end) break;
        const double right = (i + 1 < path.times.size()) ? std::min(path.times[i + 1], t_end)
                                                         : t_end;
        const double v = std::abs(path.values[i]);
        if (norm.kind == WeightedNorm::Kind::Nw) {
            // weight s^{1/2 - eps} increases, so the segment supremum sits at
            // the right endpoint.
            sup = std::max(sup, std::pow(right, 0.5 - norm.eps_nw) * v);
        } else {
            sup = std::max(sup, v);
        }
        if (right >= t_end) break;
    }
    return sup;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 50 || b.size() < 50)
        throw std::invalid_argument("ks_distance: need samples of size >= 50");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;  // absorb ties on both sides
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

double holder_time_exponent(const std::vector<double>& taus,
                            const std::vector<double>& mean_sup_increments) {
    if (taus.size() < 4) throw std::invalid_argument("holder_time_exponent: need >= 4 points");
    return loglog_slope(taus, mean_sup_increments);
}

MomentSummary summarize(const std::vector<double>& sample) {
    MomentSummary s;
    s.n = static_cast<long>(sample.size());
    if (s.n == 0) return s;
    for (double v : sample) s.mean += v;
    s.mean /= s.n;
    for (double v : sample) s.var += (v - s.mean) * (v - s.mean);
    s.var = s.n > 1 ? s.var / (s.n - 1) : 0.0;
    s.sem = std::sqrt(s.var / s.n);
    return s;
}

}  // namespace glab
