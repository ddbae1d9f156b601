#pragma once

#include <cstdint>
#include <string>

#include "msflow/calibrate.hpp"
#include "msflow/discrim.hpp"
#include "msflow/estimator.hpp"
#include "msflow/keyvalue.hpp"

namespace msflow::cli {

/// Everything a `--config` file can set. Defaults match the library.
struct Settings {
    SynthSpec stimulus;
    LKParams lk;
    int levels = 3;
    double scale = 2.0;
    double weight_floor = 1e-6;
    int realizations = 30;
    double alpha = 0.05;
    double quota = 0.90;
    bool paired_noise = true;
    Vec2 direction{1.0, 1.0};
};

/// Applies `key=value` overrides. Unknown keys are a ParseError.
void apply(const KeyValues& kv, Settings& s);

/// Keys accepted by apply(), one per line, for --help output.
std::string config_keys_help();

EstimatorConfig estimator_config(const Settings& s, Method method, const ConfidenceModel* model);
SpeedSweep sweep_from(const Settings& s, std::uint64_t seed, int jobs);
DiscriminationParams discrimination_from(const Settings& s, std::uint64_t seed, int jobs);

}  // namespace msflow::cli
