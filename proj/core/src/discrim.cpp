#include "msflow/discrim.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "msflow/parallel_for.hpp"
#include "msflow/seed.hpp"

namespace msflow {

void validate(const DiscriminationParams& params) {
    if (!(params.alpha > 0.0)) throw DomainError("discrimination: alpha must be > 0");
    if (!(params.quota > 0.5 && params.quota <= 1.0)) throw DomainError("discrimination: quota must be in (0.5, 1]");
    if (params.realizations < 1) throw DomainError("discrimination: realizations must be >= 1");
    if (params.deltas.empty()) throw DomainError("discrimination: no delta candidates");
    for (std::size_t i = 0; i < params.deltas.size(); ++i) {
        if (!(params.deltas[i] > 0.0 && params.deltas[i] < 1.0)) {
            throw DomainError("discrimination: delta candidates must lie in (0, 1)");
        }
        if (i > 0 && !(params.deltas[i] > params.deltas[i - 1])) {
            throw DomainError("discrimination: delta candidates must be increasing");
        }
    }
    for (double v : params.speeds) {
        if (!(v > 0.0)) throw DomainError("discrimination: reference speeds must be positive");
        validate(discrimination_stimulus(params, v * (1.0 + params.deltas.back()), 0));
    }
    if (!(params.direction.norm() > 0.0)) throw DomainError("discrimination: direction must be non-zero");
}

std::vector<double> default_deltas() {
    std::vector<double> d;
    for (int pct = 2; pct <= 60; ++pct) d.push_back(pct / 100.0);
    return d;
}

std::vector<double> integer_speeds(int lo, int hi) {
    std::vector<double> v;
    for (int s = lo; s <= hi; ++s) v.push_back(s);
    return v;
}

SynthSpec discrimination_stimulus(const DiscriminationParams& params, double speed, int realization) {
    SynthSpec spec = params.stimulus;
    spec.velocity = (speed / params.direction.norm()) * params.direction;
    spec.noise_sigma = params.noise_sigma;
    spec.frames = 2;
    spec.start.reset();
    spec.seed = derive_seed(params.seed, static_cast<std::uint64_t>(realization));
    if (!params.paired_noise) spec.seed = derive_seed(spec.seed, std::bit_cast<std::uint64_t>(speed));
    return spec;
}

namespace {

std::optional<double> estimate_speed(const SpeedEstimator& estimator, const SynthSpec& spec) {
    const auto v = estimator(spec, generate_sequence(spec));
    if (!v) return std::nullopt;
    return v->norm();
}

// Absorbs rounding in the oracle case where the change equals alpha exactly.
constexpr double kRelativeSlack = 1e-9;

}  // namespace

bool detectable_change(double speed, std::optional<double> base, std::optional<double> up,
                       std::optional<double> down, double alpha) {
    if (!base || !up || !down) return false;
    const double threshold = alpha * speed * (1.0 + kRelativeSlack);
    return std::abs(*base - *up) > threshold && std::abs(*base - *down) > threshold;
}

bool is_detectable(double speed, double delta_speed, const SpeedEstimator& estimator,
                   const DiscriminationParams& params, int realization) {
    if (!(speed > 0.0) || !(delta_speed >= 0.0)) throw DomainError("is_detectable: need v > 0 and dv >= 0");
    const auto base = estimate_speed(estimator, discrimination_stimulus(params, speed, realization));
    const auto up = estimate_speed(estimator, discrimination_stimulus(params, speed + delta_speed, realization));
    const auto down = estimate_speed(estimator, discrimination_stimulus(params, speed - delta_speed, realization));
    return detectable_change(speed, base, up, down, params.alpha);
}

std::optional<double> min_detectable(double speed, const SpeedEstimator& estimator,
                                     const DiscriminationParams& params) {
    validate(params);
    const auto n = static_cast<std::size_t>(params.realizations);
    std::vector<std::optional<double>> base(n);
    parallel_for(n, params.jobs, [&](std::size_t r) {
        base[r] = estimate_speed(estimator, discrimination_stimulus(params, speed, static_cast<int>(r)));
    });

    const double needed = params.quota * static_cast<double>(n) - 1e-9;
    std::vector<unsigned char> hit(n);
    for (double delta : params.deltas) {
        parallel_for(n, params.jobs, [&](std::size_t r) {
            const int real = static_cast<int>(r);
            hit[r] = 0;
            if (!base[r]) return;
            const auto up = estimate_speed(estimator, discrimination_stimulus(params, speed * (1.0 + delta), real));
            if (!up || !(std::abs(*base[r] - *up) > params.alpha * speed * (1.0 + kRelativeSlack))) return;
            const auto down = estimate_speed(estimator, discrimination_stimulus(params, speed * (1.0 - delta), real));
            hit[r] = detectable_change(speed, base[r], up, down, params.alpha) ? 1 : 0;
        });
        std::size_t count = 0;
        for (auto h : hit) count += h;
        if (static_cast<double>(count) >= needed) return delta * 100.0;
    }
    return std::nullopt;
}

DiscriminationCurve discrimination_curve(const SpeedEstimator& estimator, const DiscriminationParams& params) {
    validate(params);
    DiscriminationCurve curve;
    curve.reserve(params.speeds.size());
    for (double v : params.speeds) curve.push_back({v, min_detectable(v, estimator, params)});
    return curve;
}

CurveSummary summarize(const DiscriminationCurve& curve, double lo, double hi) {
    CurveSummary s;
    s.range_lo = lo;
    s.range_hi = hi;
    std::vector<double> values;
    for (const auto& p : curve) {
        if (p.speed >= lo && p.speed <= hi && p.min_delta_pct) values.push_back(*p.min_delta_pct);
    }
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.variance = ss / static_cast<double>(values.size() - 1);
    }
    return s;
}

double max_discriminated_speed(const DiscriminationCurve& curve, double threshold_pct) {
    double best = 0.0;
    for (const auto& p : curve) {
        if (p.min_delta_pct && *p.min_delta_pct < threshold_pct) best = std::max(best, p.speed);
    }
    return best;
}

std::vector<ComparisonRow> compare(const std::vector<NamedEstimator>& estimators, const DiscriminationParams& params,
                                   double lo, double hi) {
    std::vector<ComparisonRow> rows;
    for (const auto& e : estimators) {
        ComparisonRow row{e.method, e.levels, discrimination_curve(e.estimator, params), {}};
        row.summary = summarize(row.curve, lo, hi);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_curve_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    out << "method,L,v_obj,min_delta_pct\n";
    char line[160];
    for (const auto& row : rows) {
        for (const auto& p : row.curve) {
            if (p.min_delta_pct) {
                std::snprintf(line, sizeof line, "%s,%d,%.10g,%.10g\n", row.method.c_str(), row.levels, p.speed,
                              *p.min_delta_pct);
            } else {
                std::snprintf(line, sizeof line, "%s,%d,%.10g,\n", row.method.c_str(), row.levels, p.speed);
            }
            out << line;
        }
    }
}

void write_summary_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    out << "method,L,mean,variance,range_lo,range_hi\n";
    char line[200];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%s,%d,%.10g,%.10g,%.10g,%.10g\n", row.method.c_str(), row.levels,
                      row.summary.mean, row.summary.variance, row.summary.range_lo, row.summary.range_hi);
        out << line;
    }
}

namespace {
template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    writer(out);
    if (!out) throw IoError("failed writing " + path.string());
}
}  // namespace

void write_curve_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    write_file(path, [&](std::ostream& out) { write_curve_csv(rows, out); });
}

void write_summary_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    write_file(path, [&](std::ostream& out) { write_summary_csv(rows, out); });
}

RuntimeReport runtime_report(const EstimatorConfig& config, const Frame& prev, const Frame& next, int jobs) {
    validate(config);
    using clock = std::chrono::steady_clock;
    auto since = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };

    RuntimeReport report;
    report.method = std::string(to_string(config.method));
    report.pixels = static_cast<long>(prev.width()) * prev.height();

    const int levels = config.method == Method::single_level ? config.level + 1 : config.levels;
    report.levels = config.method == Method::single_level ? 1 : config.levels;

    const auto total_start = clock::now();
    auto t0 = clock::now();
    const Pyramid p = build_pyramid(prev, levels, config.scale, config.lk.window);
    const Pyramid n = build_pyramid(next, levels, config.scale, config.lk.window);
    report.pyramid_seconds = since(t0);

    LevelTimings timings;
    FlowOptions options;
    options.timings = &timings;
    switch (config.method) {
        case Method::single_level: {
            t0 = clock::now();
            (void)level_flow(p, n, config.level, config.lk, options);
            report.level_seconds = {since(t0)};
            break;
        }
        case Method::serial:
            (void)serial_flow(p, n, SerialParams{config.levels, config.scale, config.lk}, options);
            report.level_seconds = timings.level_seconds;
            report.merge_seconds = timings.merge_seconds;
            break;
        case Method::parallel: {
            const ParallelParams params{config.model, config.lk, config.weight_floor};
            const FlowField sequential = parallel_flow(p, n, params, options);
            report.level_seconds = timings.level_seconds;
            report.merge_seconds = timings.merge_seconds;
            report.total_seconds = since(total_start);

            FlowOptions concurrent;
            concurrent.jobs = jobs;
            t0 = clock::now();
            const FlowField flow = parallel_flow(p, n, params, concurrent);
            report.concurrent_total_seconds = report.pyramid_seconds + since(t0);
            report.concurrent_identical = flow == sequential;
            return report;
        }
    }
    report.total_seconds = since(total_start);
    return report;
}

void write_runtime_csv(const std::vector<RuntimeReport>& reports, std::ostream& out) {
    out << "method,L,pixels,pyramid_s,level_s,merge_s,total_s,concurrent_total_s,concurrent_identical\n";
    for (const auto& r : reports) {
        out << r.method << ',' << r.levels << ',' << r.pixels << ',' << r.pyramid_seconds << ',';
        for (std::size_t i = 0; i < r.level_seconds.size(); ++i) out << (i ? ";" : "") << r.level_seconds[i];
        out << ',' << r.merge_seconds << ',' << r.total_seconds << ',';
        if (r.concurrent_total_seconds) out << *r.concurrent_total_seconds;
        out << ',';
        if (r.concurrent_identical) out << (*r.concurrent_identical ? 1 : 0);
        out << '\n';
    }
}

}  // namespace msflow
