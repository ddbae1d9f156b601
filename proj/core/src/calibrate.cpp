#include "msflow/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "msflow/parallel_for.hpp"
#include "msflow/seed.hpp"

namespace msflow {

void validate(const SpeedSweep& sweep) {
    if (sweep.speeds.empty()) throw DomainError("sweep: no speeds");
    for (std::size_t i = 0; i < sweep.speeds.size(); ++i) {
        if (!(sweep.speeds[i] > 0.0)) throw DomainError("sweep: speeds must be positive");
        if (i > 0 && !(sweep.speeds[i] > sweep.speeds[i - 1])) {
            throw DomainError("sweep: speeds must be strictly increasing");
        }
    }
    if (sweep.realizations < 1) throw DomainError("sweep: realizations must be >= 1");
    if (!(sweep.noise_sigma >= 0.0)) throw DomainError("sweep: noise sigma must be >= 0");
    if (!(sweep.direction.norm() > 0.0)) throw DomainError("sweep: direction must be non-zero");
    validate(sweep_stimulus(sweep, sweep.speeds.back(), 0));
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("log_spaced: need 0 < lo <= hi and count >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

SpeedSweep default_sweep() {
    SpeedSweep sweep;
    sweep.speeds = log_spaced(0.5, 20.0, 40);
    return sweep;
}

SynthSpec sweep_stimulus(const SpeedSweep& sweep, double speed, int realization) {
    SynthSpec spec = sweep.stimulus;
    spec.velocity = (speed / sweep.direction.norm()) * sweep.direction;
    spec.noise_sigma = sweep.noise_sigma;
    spec.frames = 2;
    spec.start.reset();
    spec.seed = derive_seed(sweep.seed, static_cast<std::uint64_t>(realization));
    return spec;
}

double measured_confidence(double true_speed, const std::optional<Vec2>& estimate) {
    if (!estimate) return 0.0;
    const double k = 1.0 - std::abs((true_speed - estimate->norm()) / true_speed);
    return std::clamp(k, 0.0, 1.0);
}

std::vector<ConfidenceSample> measure_confidence(const SpeedSweep& sweep, const SpeedEstimator& estimator,
                                                 int level_tag) {
    validate(sweep);
    const std::size_t n_speeds = sweep.speeds.size();
    const auto n_real = static_cast<std::size_t>(sweep.realizations);
    std::vector<double> k(n_speeds * n_real);
    parallel_for(k.size(), sweep.jobs, [&](std::size_t i) {
        const double speed = sweep.speeds[i / n_real];
        const SynthSpec spec = sweep_stimulus(sweep, speed, static_cast<int>(i % n_real));
        k[i] = measured_confidence(speed, estimator(spec, generate_sequence(spec)));
    });

    std::vector<ConfidenceSample> samples;
    samples.reserve(n_speeds);
    for (std::size_t s = 0; s < n_speeds; ++s) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n_real; ++r) sum += k[s * n_real + r];
        const double mean = sum / static_cast<double>(n_real);
        double ss = 0.0;
        for (std::size_t r = 0; r < n_real; ++r) ss += (k[s * n_real + r] - mean) * (k[s * n_real + r] - mean);
        const double sd = n_real > 1 ? std::sqrt(ss / static_cast<double>(n_real - 1)) : 0.0;
        samples.push_back({level_tag, sweep.speeds[s], sweep.realizations, mean, sd});
    }
    return samples;
}

std::vector<ConfidenceSample> measure_confidence(const SpeedSweep& sweep, int level, const LKParams& lk,
                                                 double scale) {
    EstimatorConfig config;
    config.method = Method::single_level;
    config.level = level;
    config.scale = scale;
    config.lk = lk;
    return measure_confidence(sweep, make_speed_estimator(config), level);
}

double fit_objective(const ConfidenceModel& model, const std::vector<std::vector<ConfidenceSample>>& per_level) {
    double sum = 0.0;
    for (std::size_t l = 0; l < per_level.size(); ++l) {
        for (const auto& s : per_level[l]) {
            const double r = model_confidence(model, static_cast<int>(l), s.speed) - s.mean;
            sum += r * r;
        }
    }
    return sum;
}

namespace {

struct Search {
    double mu = 0.0;
    double sigma = 1.0;
    double grid_best = 0.0;
    double best = 0.0;
};

Search fit_log_gaussian(const std::vector<std::vector<ConfidenceSample>>& per_level, double scale, double mu_lo,
                        double mu_hi) {
    ConfidenceModel m;
    m.scale = scale;
    m.levels = std::max<int>(1, static_cast<int>(per_level.size()));
    auto objective = [&](double mu, double sigma) {
        m.mu0 = mu;
        m.sigma0 = sigma;
        return fit_objective(m, per_level);
    };

    constexpr int mu_steps = 121;
    constexpr int sigma_steps = 60;
    constexpr double sigma_lo = 0.05;
    constexpr double sigma_hi = 3.0;
    const double dmu = (mu_hi - mu_lo) / (mu_steps - 1);
    const double dsigma = (sigma_hi - sigma_lo) / (sigma_steps - 1);

    Search s;
    s.best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mu_steps; ++i) {
        for (int j = 0; j < sigma_steps; ++j) {
            const double mu = mu_lo + i * dmu;
            const double sigma = sigma_lo + j * dsigma;
            const double f = objective(mu, sigma);
            if (f < s.best) {
                s.best = f;
                s.mu = mu;
                s.sigma = sigma;
            }
        }
    }
    s.grid_best = s.best;

    // Compass search; only strict improvements are accepted.
    double step_mu = dmu;
    double step_sigma = dsigma;
    while (step_mu > 1e-12 || step_sigma > 1e-12) {
        bool improved = false;
        const double cand[4][2] = {
            {s.mu + step_mu, s.sigma}, {s.mu - step_mu, s.sigma}, {s.mu, s.sigma + step_sigma}, {s.mu, s.sigma - step_sigma}};
        for (const auto& c : cand) {
            if (!(c[1] > 1e-9)) continue;
            const double f = objective(c[0], c[1]);
            if (f < s.best) {
                s.best = f;
                s.mu = c[0];
                s.sigma = c[1];
                improved = true;
                break;
            }
        }
        if (!improved) {
            step_mu *= 0.5;
            step_sigma *= 0.5;
        }
    }
    return s;
}

}  // namespace

FitReport fit_model(const std::vector<std::vector<ConfidenceSample>>& per_level, double scale, int levels) {
    if (levels < 1 || per_level.size() < static_cast<std::size_t>(levels)) {
        throw FitError("fit_model: need samples for each of the " + std::to_string(levels) + " levels");
    }
    if (!(scale > 1.0)) throw FitError("fit_model: scale factor must be > 1");
    const auto& level0 = per_level.front();
    std::vector<double> informative;
    for (const auto& s : level0) {
        if (s.mean > 0.05 && std::ranges::find(informative, s.speed) == informative.end()) {
            informative.push_back(s.speed);
        }
    }
    if (informative.size() < 4) {
        throw FitError("fit_model: level 0 has " + std::to_string(informative.size()) +
                       " speeds with confidence above 0.05; need at least 4");
    }

    const std::vector<std::vector<ConfidenceSample>> used(per_level.begin(), per_level.begin() + levels);
    const Search s = fit_log_gaussian(used, scale, std::log(0.1), std::log(10.0));

    FitReport report;
    report.model = ConfidenceModel{s.mu, s.sigma, scale, levels};
    report.grid_objective = s.grid_best;
    report.objective = s.best;
    for (int l = 0; l < levels; ++l) {
        const auto& samples = used[static_cast<std::size_t>(l)];
        double ss = 0.0;
        for (const auto& smp : samples) {
            const double r = model_confidence(report.model, l, smp.speed) - smp.mean;
            ss += r * r;
        }
        report.rms_per_level.push_back(samples.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(samples.size())));
    }
    return report;
}

double empirical_peak(const std::vector<ConfidenceSample>& samples) {
    if (samples.empty()) throw DomainError("empirical_peak: no samples");
    const auto it = std::ranges::max_element(samples, {}, &ConfidenceSample::mean);
    return it->speed;
}

double fitted_peak(const std::vector<ConfidenceSample>& samples) {
    if (samples.empty()) throw DomainError("fitted_peak: no samples");
    const auto [lo, hi] = std::ranges::minmax(samples, {}, &ConfidenceSample::speed);
    const Search s = fit_log_gaussian({samples}, 2.0, std::log(lo.speed), std::log(hi.speed));
    return std::exp(s.mu);
}

void write_confidence_csv(const std::vector<ConfidenceSample>& samples, std::ostream& out) {
    out << "level,v_r,k_mean,k_std,n\n";
    char line[160];
    for (const auto& s : samples) {
        std::snprintf(line, sizeof line, "%d,%.10g,%.10g,%.10g,%d\n", s.level, s.speed, s.mean, s.stddev,
                      s.realizations);
        out << line;
    }
}

void write_confidence_csv(const std::vector<ConfidenceSample>& samples, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_confidence_csv(samples, out);
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace msflow
