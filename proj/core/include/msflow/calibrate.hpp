#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "msflow/estimator.hpp"

namespace msflow {

/// Mean Eq.-style confidence 1 - |(v_r - v_e)/v_r| (clamped to [0,1]) at one speed.
struct ConfidenceSample {
    int level = 0;          ///< pyramid level, or -1 for a whole estimator
    double speed = 0.0;     ///< reference speed v_r, px/frame
    int realizations = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct SpeedSweep {
    std::vector<double> speeds;   ///< positive, strictly increasing
    int realizations = 30;
    double noise_sigma = 0.02;
    Vec2 direction{1.0, 1.0};
    SynthSpec stimulus;           ///< template; velocity, noise and seed are overwritten
    std::uint64_t seed = 0;       ///< master seed
    int jobs = 1;
};

void validate(const SpeedSweep& sweep);

/// `count` log-spaced speeds covering [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

/// Defaults: 40 log-spaced speeds in [0.5, 20] px/frame, 30 realizations.
SpeedSweep default_sweep();

/// Stimulus for one sweep point; the seed depends only on (master, realization),
/// so every speed sees the same noise schedule for a given realization.
SynthSpec sweep_stimulus(const SpeedSweep& sweep, double speed, int realization);

/// Clamped single-measurement confidence; 0 for a missing estimate.
double measured_confidence(double true_speed, const std::optional<Vec2>& estimate);

/// Runs `estimator` over the sweep; samples carry `level_tag` as their level.
std::vector<ConfidenceSample> measure_confidence(const SpeedSweep& sweep, const SpeedEstimator& estimator,
                                                 int level_tag = -1);

/// Confidence of LK run on pyramid level `level` only (vectors rescaled to level 0).
std::vector<ConfidenceSample> measure_confidence(const SpeedSweep& sweep, int level, const LKParams& lk,
                                                 double scale = 2.0);

struct FitReport {
    ConfidenceModel model;
    double grid_objective = 0.0;   ///< best objective on the coarse grid
    double objective = 0.0;        ///< after local refinement
    std::vector<double> rms_per_level;
};

/// Least-squares fit of (mu0, sigma0) with mu_l = mu0 + l*ln(scale) and a
/// shared sigma: coarse grid over mu0 in [ln 0.1, ln 10], sigma0 in
/// [0.05, 3], then deterministic pattern-search refinement.
/// `per_level[l]` holds the samples of level l. Throws FitError when level 0
/// has fewer than 4 speeds with confidence above 0.05.
FitReport fit_model(const std::vector<std::vector<ConfidenceSample>>& per_level, double scale, int levels);

/// Sum of squared model residuals over all levels and speeds.
double fit_objective(const ConfidenceModel& model, const std::vector<std::vector<ConfidenceSample>>& per_level);

/// Speed of the largest mean confidence (first one on ties).
double empirical_peak(const std::vector<ConfidenceSample>& samples);

/// Peak of a single-level log-Gaussian fitted to `samples` alone
/// (independent centre and width); smoother than the raw argmax.
double fitted_peak(const std::vector<ConfidenceSample>& samples);

/// CSV `level,v_r,k_mean,k_std,n`.
void write_confidence_csv(const std::vector<ConfidenceSample>& samples, std::ostream& out);
void write_confidence_csv(const std::vector<ConfidenceSample>& samples, const std::filesystem::path& path);

}  // namespace msflow
