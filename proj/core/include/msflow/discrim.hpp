#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msflow/estimator.hpp"

namespace msflow {

struct DiscriminationParams {
    double alpha = 0.05;              ///< required relative change of the estimate
    std::vector<double> speeds;       ///< reference speeds v_obj, px/frame
    std::vector<double> deltas;       ///< candidate dv/v fractions, increasing
    int realizations = 30;
    double quota = 0.90;              ///< fraction of realizations that must detect
    SynthSpec stimulus;               ///< template; velocity, noise and seed are overwritten
    Vec2 direction{1.0, 1.0};
    double noise_sigma = 0.02;
    std::uint64_t seed = 0;
    /// When false each stimulus speed draws its own noise (seed keyed by
    /// realization and speed) instead of sharing the realization's noise.
    bool paired_noise = true;
    int jobs = 1;
};

void validate(const DiscriminationParams& params);

/// Candidates 2%, 3%, ..., 60%.
std::vector<double> default_deltas();

/// Integer speeds lo, lo+1, ..., hi.
std::vector<double> integer_speeds(int lo, int hi);

/// Stimulus at `speed` for one realization. With paired noise the seed
/// depends only on the realization, so v, v+dv and v-dv share it.
SynthSpec discrimination_stimulus(const DiscriminationParams& params, double speed, int realization);

/// True when |v^(v) - v^(v+dv)| > alpha*v and |v^(v) - v^(v-dv)| > alpha*v.
/// A missing estimate is never detectable.
bool is_detectable(double speed, double delta_speed, const SpeedEstimator& estimator,
                   const DiscriminationParams& params, int realization);

/// Inequality on given estimate magnitudes (shared with is_detectable).
bool detectable_change(double speed, std::optional<double> base, std::optional<double> up,
                       std::optional<double> down, double alpha);

/// Smallest candidate (percent) detected in at least `quota` of the
/// realizations, or nullopt when none qualifies.
std::optional<double> min_detectable(double speed, const SpeedEstimator& estimator,
                                     const DiscriminationParams& params);

struct CurvePoint {
    double speed = 0.0;
    std::optional<double> min_delta_pct;
};

using DiscriminationCurve = std::vector<CurvePoint>;

DiscriminationCurve discrimination_curve(const SpeedEstimator& estimator, const DiscriminationParams& params);

/// Mean and sample variance (n-1) of the curve over speeds in [lo, hi];
/// speeds with no detectable change are left out.
struct CurveSummary {
    double mean = 0.0;
    double variance = 0.0;
    double range_lo = 0.0;
    double range_hi = 0.0;
    int count = 0;
};

CurveSummary summarize(const DiscriminationCurve& curve, double lo, double hi);

/// Largest reference speed whose min_detectable is below `threshold_pct`
/// (0 when none is).
double max_discriminated_speed(const DiscriminationCurve& curve, double threshold_pct = 30.0);

struct NamedEstimator {
    std::string method;
    int levels = 1;
    SpeedEstimator estimator;
};

struct ComparisonRow {
    std::string method;
    int levels = 1;
    DiscriminationCurve curve;
    CurveSummary summary;
};

std::vector<ComparisonRow> compare(const std::vector<NamedEstimator>& estimators, const DiscriminationParams& params,
                                   double lo, double hi);

/// CSV `method,L,v_obj,min_delta_pct` (empty last field: none detectable).
void write_curve_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);
void write_curve_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);
/// CSV `method,L,mean,variance,range_lo,range_hi`.
void write_summary_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);

/// Wall-clock breakdown of one flow computation, in seconds.
struct RuntimeReport {
    std::string method;
    long pixels = 0;                    ///< level-0 image size N
    int levels = 1;
    double pyramid_seconds = 0.0;
    std::vector<double> level_seconds;  ///< LK time per level (sequential run)
    double merge_seconds = 0.0;         ///< fusion (parallel) or projection (serial)
    double total_seconds = 0.0;         ///< sequential total
    /// Parallel only: the same flow with levels run on `jobs` threads.
    std::optional<double> concurrent_total_seconds;
    std::optional<bool> concurrent_identical;
};

RuntimeReport runtime_report(const EstimatorConfig& config, const Frame& prev, const Frame& next, int jobs = 1);

void write_runtime_csv(const std::vector<RuntimeReport>& reports, std::ostream& out);

}  // namespace msflow
