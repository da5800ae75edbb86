#include "glab/height.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace glab {

HeightField init_height(const SpinConfig& config, int scale) {
    HeightField h;
    h.scale = scale;
    h.geometry = config.geometry;
    h.values.assign(config.size(), 0.0);
    const double step = 1.0 / std::sqrt(static_cast<double>(scale));
    const int origin = config.geometry.origin();
    // h_0 = 0 at time zero; forward and backward partial sums of the spins.
    double acc = 0.0;
    for (int idx = origin + 1; idx < config.size(); ++idx) {
        acc += step * config.spins[idx];
        h.values[idx] = acc;
    }
    acc = 0.0;
    for (int idx = origin - 1; idx >= 0; --idx) {
        acc -= step * config.spins[idx + 1];
        h.values[idx] = acc;
    }
    return h;
}

void update_height(HeightField& h, const JumpEvent& ev) {
    if (!ev.executed) return;
    const double delta = (ev.direction == JumpDirection::Right ? -2.0 : 2.0) /
                         std::sqrt(static_cast<double>(h.scale));
    const int L = static_cast<int>(h.values.size());
    int idx = h.index_of_label(ev.x);
    for (int j = 0; j < ev.k; ++j) {
        h.values[idx] += delta;
        ++idx;
        if (idx == L) idx = 0;  // torus wrap; segment bonds never reach here
    }
}

double increment_identity_error(const HeightField& h, const SpinConfig& config) {
    const double step = 1.0 / std::sqrt(static_cast<double>(h.scale));
    double worst = 0.0;
    for (int idx = 1; idx < config.size(); ++idx) {
        const double lhs = h.values[idx] - h.values[idx - 1];
        worst = std::max(worst, std::abs(lhs - step * config.spins[idx]));
    }
    return worst;
}

std::vector<double> GartnerField::values() const {
    std::vector<double> out(log_values.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_values[i]);
    return out;
}

GartnerField gartner(const HeightField& h, double lambda, double vN, double time) {
    GartnerField z;
    z.lambda = lambda;
    z.vN = vN;
    z.time = time;
    z.log_values.resize(h.values.size());
    for (size_t i = 0; i < h.values.size(); ++i)
        z.log_values[i] = -lambda * h.values[i] + vN * time;
    return z;
}

GartnerField narrow_wedge_rescale(const GartnerField& z, int scale) {
    if (z.lambda == 0.0) throw std::invalid_argument("narrow_wedge_rescale: lambda = 0");
    GartnerField out = z;
    const double factor =
        std::log(0.5 * std::sqrt(static_cast<double>(scale)) / std::abs(z.lambda));
    for (auto& lv : out.log_values) lv += factor;
    return out;
}

double calibrate_vN(const ModelParams& params, const DerivedConstants& constants) {
    if (!params.geometry.is_torus())
        throw std::invalid_argument("calibrate_vN: torus geometry required");
    const int m = params.max_range();
    if (params.geometry.size < 2 * m + 1)
        throw std::invalid_argument("calibrate_vN: torus smaller than 2m+1");
    if (constants.lambda == 0.0) return 0.0;  // Z is configuration-independent

    // Window labels 1-m..m cover every bond (y, y+k), y in [1-k, 0], that can
    // move h across the marked edge (0,1) in one jump.
    const int w = 2 * m;
    const double root_n = std::sqrt(static_cast<double>(params.scale));
    const double weight = std::ldexp(1.0, -w);  // mu_0: each spin fair +/-1
    double drift = 0.0;
    for (uint32_t bits = 0; bits < (1u << w); ++bits) {
        auto spin_at = [&](int label) -> int8_t {
            const int slot = label - (1 - m);  // 0..w-1
            return (bits >> slot) & 1u ? int8_t{1} : int8_t{-1};
        };
        double local = 0.0;
        for (int k = 1; k <= m; ++k) {
            for (int y = 1 - k; y <= 0; ++y) {
                const int8_t sy = spin_at(y);
                const int8_t syk = spin_at(y + k);
                if (sy == syk) continue;
                const double rate = jump_rate_spins(params, k, sy, syk);
                // Rightward crossing lowers h0 by 2N^{-1/2}; leftward raises it.
                const double dh0 = (sy == 1 ? -2.0 : 2.0) / root_n;
                local += rate * std::expm1(-constants.lambda * dh0);
            }
        }
        drift += weight * local;
    }
    return -drift;
}

void write_field_snapshot(const std::string& dir, const SpinConfig& config, const HeightField& h,
                          const GartnerField& z, uint64_t seed) {
    std::filesystem::create_directories(dir);
    write_field_csv(dir + "/field.csv", config, h, z);
    nlohmann::json manifest;
    manifest["N"] = h.scale;
    manifest["lambda"] = z.lambda;
    manifest["vN"] = z.vN;
    manifest["T"] = z.time;
    manifest["seed"] = seed;
    std::ofstream out(dir + "/manifest.json");
    out << manifest.dump(2) << '\n';
}

void write_field_csv(const std::string& path, const SpinConfig& config, const HeightField& h,
                     const GartnerField& z) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,eta,h,Z\n";
    char buf[128];
    for (int idx = 0; idx < config.size(); ++idx) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", config.label_of_index(idx),
                      static_cast<int>(config.spins[idx]), h.values[idx],
                      std::exp(z.log_values[idx]));
        out << buf;
    }
}

}  // namespace glab
