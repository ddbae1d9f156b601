// msflow: synthetic stimuli, optical flow, calibration and discrimination runs.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "msflow/calibrate.hpp"
#include "msflow/discrim.hpp"
#include "msflow/estimator.hpp"
#include "msflow/flow_io.hpp"
#include "msflow/keyvalue.hpp"
#include "msflow/pgm.hpp"
#include "msflow/pyramid.hpp"
#include "msflow/synth.hpp"
#include "settings.hpp"

namespace fs = std::filesystem;
using namespace msflow;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kParse = 3,
    kIo = 4,
    kDomain = 5,
    kFit = 6,
};

struct Global {
    std::string config;
    int jobs = 1;
    std::uint64_t seed = 0;
};

Vec2 parse_pair(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ParseError(std::string(what) + ": expected 'a,b', got '" + text + "'");
    return {parse_real(text.substr(0, comma), what), parse_real(text.substr(comma + 1), what)};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::optional<ConfidenceModel> maybe_model(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return load_model(path);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string format(const char* fmt, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
    std::string out;
    double speed = 0.0;
    std::string velocity;
    int frames = 2;
    bool dump_levels = false;
};

void run_synth(const Global& g, const cli::Settings& s, const SynthArgs& a) {
    SynthSpec spec = s.stimulus;
    spec.frames = a.frames;
    spec.seed = g.seed;
    if (!a.velocity.empty()) {
        spec.velocity = parse_pair(a.velocity, "--velocity");
    } else {
        if (!(s.direction.norm() > 0.0)) throw DomainError("direction must be non-zero");
        spec.velocity = (a.speed / s.direction.norm()) * s.direction;
    }
    const FrameSequence seq = generate_sequence(spec);
    const fs::path dir(a.out);
    ensure_dir(dir);
    save_sequence(seq, dir);

    std::ofstream truth(dir / "truth.txt");
    if (!truth) throw IoError("cannot write " + (dir / "truth.txt").string());
    char buf[256];
    std::snprintf(buf, sizeof buf, "u=%.17g\nv=%.17g\nspeed=%.17g\nnoise=%.17g\nseed=%llu\nobject=%s\n",
                  spec.velocity.u, spec.velocity.v, spec.velocity.norm(), spec.noise_sigma,
                  static_cast<unsigned long long>(spec.seed), std::string(to_string(spec.kind)).c_str());
    truth << buf;

    if (a.dump_levels) {
        const Pyramid p = build_pyramid(seq.front(), s.levels, s.scale, s.lk.window);
        for (int l = 0; l < p.level_count(); ++l) {
            std::snprintf(buf, sizeof buf, "level_%d.pgm", l);
            save_pgm(p.level(l), dir / buf);
        }
    }
    std::printf("wrote %zu frames to %s (velocity %s)\n", seq.size(), dir.string().c_str(),
                format("%.6g,%.6g", spec.velocity.u, spec.velocity.v).c_str());
}

// ---- flow ------------------------------------------------------------------

struct FlowArgs {
    std::string prev;
    std::string next;
    std::string method = "parallel";
    std::string model;
    std::optional<int> levels;
    int level = 0;
    std::string out;
};

void run_flow(const Global& g, cli::Settings s, const FlowArgs& a) {
    if (a.levels) s.levels = *a.levels;
    const Method method = parse_method(a.method);
    const auto model = maybe_model(a.model);
    EstimatorConfig cfg = cli::estimator_config(s, method, model ? &*model : nullptr);
    cfg.level = a.level;
    const Frame prev = load_pgm(a.prev);
    const Frame next = load_pgm(a.next);
    FlowOptions opt;
    opt.jobs = g.jobs;
    const FlowField flow = estimate_flow(cfg, prev, next, opt);
    write_flow_csv(flow, fs::path(a.out));

    double su = 0.0;
    double sv = 0.0;
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            if (!flow.valid(x, y)) continue;
            su += flow.at(x, y).u;
            sv += flow.at(x, y).v;
        }
    }
    const double n = static_cast<double>(flow.valid_count());
    std::printf("%s: %zu of %d pixels valid", std::string(to_string(method)).c_str(), flow.valid_count(),
                flow.width() * flow.height());
    if (n > 0) std::printf(", mean flow %s", format("(%.4f, %.4f)", su / n, sv / n).c_str());
    std::printf("\n");
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
    std::string out;
    std::string csv;
    std::optional<int> levels;
    std::string range = "0.5,20";
    int count = 40;
};

void run_calibrate(const Global& g, cli::Settings s, const CalibrateArgs& a) {
    if (a.levels) s.levels = *a.levels;
    SpeedSweep sweep = cli::sweep_from(s, g.seed, g.jobs);
    const Vec2 range = parse_pair(a.range, "--range");
    sweep.speeds = log_spaced(range.u, range.v, a.count);
    validate(sweep);

    std::vector<std::vector<ConfidenceSample>> per_level;
    std::vector<ConfidenceSample> all;
    for (int l = 0; l < s.levels; ++l) {
        std::fprintf(stderr, "measuring level %d\n", l);
        per_level.push_back(measure_confidence(sweep, l, s.lk, s.scale));
        all.insert(all.end(), per_level.back().begin(), per_level.back().end());
    }
    if (!a.csv.empty()) write_confidence_csv(all, fs::path(a.csv));
    const FitReport fit = fit_model(per_level, s.scale, s.levels);
    save_model(fit.model, a.out);

    std::printf("mu0=%.6f sigma0=%.6f c=%g L=%d\n", fit.model.mu0, fit.model.sigma0, fit.model.scale,
                fit.model.levels);
    std::printf("objective: grid %.6f, refined %.6f\n", fit.grid_objective, fit.objective);
    for (int l = 0; l < s.levels; ++l) {
        const auto& samples = per_level[static_cast<std::size_t>(l)];
        std::printf("level %d: rms %.4f, model peak %.3f, fitted peak %.3f, empirical peak %.3f px/frame\n", l,
                    fit.rms_per_level[static_cast<std::size_t>(l)], std::exp(level_mean(fit.model, l)),
                    fitted_peak(samples), empirical_peak(samples));
    }
}

// ---- discriminate / compare -------------------------------------------------

struct DiscrimArgs {
    std::string methods = "parallel";
    std::string model;
    std::string range = "1,15";
    std::string out;
    std::string out_dir;
    std::optional<int> levels;
};

std::vector<double> integer_range(const std::string& text) {
    const Vec2 r = parse_pair(text, "--range");
    if (r.u != std::floor(r.u) || r.v != std::floor(r.v) || r.u < 1 || r.v < r.u) {
        throw DomainError("--range needs integers 1 <= lo <= hi");
    }
    return integer_speeds(static_cast<int>(r.u), static_cast<int>(r.v));
}

std::vector<ComparisonRow> run_comparison(const Global& g, cli::Settings s, const DiscrimArgs& a) {
    if (a.levels) s.levels = *a.levels;
    const auto model = maybe_model(a.model);
    DiscriminationParams params = cli::discrimination_from(s, g.seed, g.jobs);
    params.speeds = integer_range(a.range);
    validate(params);

    std::vector<NamedEstimator> estimators;
    for (const auto& name : split_list(a.methods)) {
        const Method m = parse_method(name);
        EstimatorConfig cfg = cli::estimator_config(s, m, model ? &*model : nullptr);
        estimators.push_back({std::string(to_string(m)), m == Method::single_level ? 1 : cfg.levels,
                              make_speed_estimator(cfg)});
    }
    if (estimators.empty()) throw DomainError("no methods given");
    const double lo = params.speeds.front();
    const double hi = params.speeds.back();
    auto rows = compare(estimators, params, lo, hi);
    for (const auto& row : rows) {
        std::printf("%-9s L=%d  mean=%.3f  variance=%.3f  over %d of %zu speeds  max speed < 30%%: %g\n",
                    row.method.c_str(), row.levels, row.summary.mean, row.summary.variance, row.summary.count,
                    row.curve.size(), max_discriminated_speed(row.curve, 30.0));
    }
    return rows;
}

void run_discriminate(const Global& g, const cli::Settings& s, const DiscrimArgs& a) {
    const auto rows = run_comparison(g, s, a);
    if (!a.out.empty()) {
        write_curve_csv(rows, fs::path(a.out));
    } else {
        write_curve_csv(rows, std::cout);
    }
}

void run_compare(const Global& g, const cli::Settings& s, const DiscrimArgs& a) {
    const auto rows = run_comparison(g, s, a);
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    write_curve_csv(rows, dir / "curves.csv");
    write_summary_csv(rows, dir / "summary.csv");
    std::printf("wrote %s and %s\n", (dir / "curves.csv").string().c_str(), (dir / "summary.csv").string().c_str());
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string methods = "lk,serial,parallel";
    std::string model;
    int size = 128;
    double speed = 4.0;
    int repeats = 3;
    std::string out;
};

void run_bench(const Global& g, cli::Settings s, const BenchArgs& a) {
    s.stimulus.width = a.size;
    s.stimulus.height = a.size;
    SynthSpec spec = s.stimulus;
    spec.velocity = (a.speed / s.direction.norm()) * s.direction;
    spec.seed = g.seed;
    const FrameSequence seq = generate_sequence(spec);
    const auto model = maybe_model(a.model);

    std::vector<RuntimeReport> reports;
    for (const auto& name : split_list(a.methods)) {
        const Method m = parse_method(name);
        const EstimatorConfig cfg = cli::estimator_config(s, m, model ? &*model : nullptr);
        // Keep the fastest of the repeats; the first run also warms caches.
        std::optional<RuntimeReport> best;
        for (int r = 0; r < std::max(1, a.repeats); ++r) {
            RuntimeReport rep = runtime_report(cfg, seq[0], seq[1], std::max(g.jobs, cfg.levels));
            if (!best || rep.total_seconds < best->total_seconds) best = std::move(rep);
        }
        reports.push_back(std::move(*best));
    }
    if (!a.out.empty()) {
        std::ofstream out(a.out);
        if (!out) throw IoError("cannot write " + a.out);
        write_runtime_csv(reports, out);
    }
    write_runtime_csv(reports, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale optical flow: stimuli, estimation, calibration and speed discrimination"};
    app.require_subcommand(1);

    Global g;
    app.add_option("--config", g.config, "key=value file overriding defaults")->check(CLI::ExistingFile);
    app.add_option("--jobs", g.jobs, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "master seed for every random draw");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "render a moving-object sequence as PGM frames");
    synth_cmd->add_option("--out", synth.out, "output directory")->required();
    auto* speed_opt = synth_cmd->add_option("--speed", synth.speed, "speed along the configured direction (px/frame)");
    synth_cmd->add_option("--velocity", synth.velocity, "velocity 'u,v' in px/frame")->excludes(speed_opt);
    synth_cmd->add_option("--frames", synth.frames, "number of frames")->check(CLI::PositiveNumber);
    synth_cmd->add_flag("--dump-levels", synth.dump_levels, "also write the pyramid of frame 0 as level_<l>.pgm");

    FlowArgs flow;
    auto* flow_cmd = app.add_subcommand("flow", "estimate dense flow between two PGM frames");
    flow_cmd->add_option("--prev", flow.prev, "first frame")->required()->check(CLI::ExistingFile);
    flow_cmd->add_option("--next", flow.next, "second frame")->required()->check(CLI::ExistingFile);
    flow_cmd->add_option("--method", flow.method, "lk | serial | parallel");
    flow_cmd->add_option("--model", flow.model, "confidence model file (parallel)");
    flow_cmd->add_option("--levels", flow.levels, "pyramid levels L");
    flow_cmd->add_option("--level", flow.level, "pyramid level for --method lk");
    flow_cmd->add_option("--out", flow.out, "flow CSV")->required();

    CalibrateArgs cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "measure per-level confidence and fit the model");
    cal_cmd->add_option("--out", cal.out, "model file to write")->required();
    cal_cmd->add_option("--csv", cal.csv, "also write the measured confidence curves");
    cal_cmd->add_option("--levels", cal.levels, "pyramid levels L");
    cal_cmd->add_option("--range", cal.range, "speed range 'lo,hi' (px/frame)");
    cal_cmd->add_option("--count", cal.count, "log-spaced speeds in the range")->check(CLI::PositiveNumber);

    DiscrimArgs dis;
    auto* dis_cmd = app.add_subcommand("discriminate", "minimal detectable speed change per reference speed");
    dis_cmd->add_option("--method", dis.methods, "lk | serial | parallel");
    dis_cmd->add_option("--model", dis.model, "confidence model file (parallel)");
    dis_cmd->add_option("--range", dis.range, "integer reference speeds 'lo,hi'");
    dis_cmd->add_option("--levels", dis.levels, "pyramid levels L");
    dis_cmd->add_option("--out", dis.out, "curve CSV (stdout if omitted)");

    DiscrimArgs cmp;
    cmp.methods = "parallel,serial";
    auto* cmp_cmd = app.add_subcommand("compare", "discrimination curves and summaries for several methods");
    cmp_cmd->add_option("--methods", cmp.methods, "comma-separated methods");
    cmp_cmd->add_option("--model", cmp.model, "confidence model file (parallel)");
    cmp_cmd->add_option("--range", cmp.range, "integer reference speeds 'lo,hi'");
    cmp_cmd->add_option("--levels", cmp.levels, "pyramid levels L");
    cmp_cmd->add_option("--out-dir", cmp.out_dir, "directory for curves.csv and summary.csv")->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "per-level runtime breakdown of one flow computation");
    bench_cmd->add_option("--methods", bench.methods, "comma-separated methods");
    bench_cmd->add_option("--model", bench.model, "confidence model file (parallel)");
    bench_cmd->add_option("--size", bench.size, "square frame size")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--speed", bench.speed, "stimulus speed (px/frame)");
    bench_cmd->add_option("--repeats", bench.repeats, "keep the fastest of this many runs");
    bench_cmd->add_option("--out", bench.out, "runtime CSV");

    // set after the subcommands so they do not inherit it
    app.footer("Config keys (key=value, one per line, '#' comments):\n" + cli::config_keys_help());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        cli::Settings settings;
        if (!g.config.empty()) cli::apply(read_key_values(g.config), settings);

        if (*synth_cmd) run_synth(g, settings, synth);
        if (*flow_cmd) run_flow(g, settings, flow);
        if (*cal_cmd) run_calibrate(g, settings, cal);
        if (*dis_cmd) run_discriminate(g, settings, dis);
        if (*cmp_cmd) run_compare(g, settings, cmp);
        if (*bench_cmd) run_bench(g, settings, bench);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "msflow: parse error: %s\n", e.what());
        return kParse;
    } catch (const IoError& e) {
        std::fprintf(stderr, "msflow: I/O error: %s\n", e.what());
        return kIo;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "msflow: invalid argument: %s\n", e.what());
        return kDomain;
    } catch (const FitError& e) {
        std::fprintf(stderr, "msflow: fit failed: %s\n", e.what());
        return kFit;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "msflow: %s\n", e.what());
        return kFailure;
    }
    return kOk;
}
