#pragma once

#include <functional>
#include <string>
#include <vector>

#include "glab/config.hpp"
#include "glab/model.hpp"
#include "glab/run_record.hpp"
#include "glab/schedule.hpp"
#include "glab/series.hpp"
#include "glab/spin.hpp"

namespace glab {

// Model assembly from configuration keys (N, L, geometry, alpha, gamma or
// gamma_mode = "specialized" with lambda, assumption2_constant).
ModelParams params_from_config(const Config& config);

// Same dynamics with the N^2 speed stripped but the relative tilt N^{-1/2}
// gamma_k preserved (scale 1, gamma' = gamma / sqrt(N)).
ModelParams unscaled(const ModelParams& params);

// vN from config override or the stationary-drift calibration; reports which.
double resolve_vN(const Config& config, const ModelParams& params,
                  const DerivedConstants& constants, std::string* source = nullptr);

// Named initial data: "flat" (alternating), "bernoulli", "narrow-wedge",
// "all-plus", "single-particle".
SpinConfig initial_from_config(const Config& config, const ModelParams& params, Rng& rng);

// Dispatch by config key `experiment`; master seed from config `seed`,
// overridden by GLAB_SEED. Persists under `out_dir` unless `persist` = false.
RunRecord run_experiment(const Config& config);

RunRecord experiment_stationarity(const Config& config);
RunRecord experiment_kernel_bounds(const Config& config);
RunRecord experiment_kv(const Config& config);
RunRecord experiment_lsi(const Config& config);
RunRecord experiment_azuma(const Config& config);
RunRecord experiment_coupling(const Config& config);
RunRecord experiment_entropy_production(const Config& config);
RunRecord experiment_schedule_decay(const Config& config);
RunRecord experiment_holder(const Config& config);
RunRecord experiment_kpz_compare(const Config& config);

// Replica-indexed map so results never depend on scheduling.
void for_each_replica(int replicas, const std::function<void(int)>& body);

// One-point Gartner samples Z^N_{T,0} under the model from `params`.
std::vector<double> sample_gartner_origin(const ModelParams& params, const Config& config,
                                          double T, int replicas, uint64_t seed, double vN,
                                          double lambda);

struct ScheduleDecayRow {
    int index = 0;
    double tau = 0.0;
    double mean_square = 0.0;
    double sem = 0.0;
    double trigger_fraction = 0.0;
};

std::vector<ScheduleDecayRow> schedule_decay_measure(const ScaleSchedule& schedule,
                                                     const Config& config);

}  // namespace glab
