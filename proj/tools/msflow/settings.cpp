#include "settings.hpp"

#include <functional>
#include <map>

namespace msflow::cli {

namespace {

bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw ParseError("'" + key + "': expected true/false, got '" + text + "'");
}

using Setter = std::function<void(Settings&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"width", [](Settings& s, auto& k, auto& v) { s.stimulus.width = parse_int(v, k); }},
        {"height", [](Settings& s, auto& k, auto& v) { s.stimulus.height = parse_int(v, k); }},
        {"object", [](Settings& s, auto&, auto& v) { s.stimulus.kind = parse_object_kind(v); }},
        {"diameter", [](Settings& s, auto& k, auto& v) { s.stimulus.diameter = parse_real(v, k); }},
        {"contrast", [](Settings& s, auto& k, auto& v) { s.stimulus.contrast = parse_real(v, k); }},
        {"background", [](Settings& s, auto& k, auto& v) { s.stimulus.background = parse_real(v, k); }},
        {"noise", [](Settings& s, auto& k, auto& v) { s.stimulus.noise_sigma = parse_real(v, k); }},
        {"direction_u", [](Settings& s, auto& k, auto& v) { s.direction.u = parse_real(v, k); }},
        {"direction_v", [](Settings& s, auto& k, auto& v) { s.direction.v = parse_real(v, k); }},
        {"window", [](Settings& s, auto& k, auto& v) { s.lk.window = parse_int(v, k); }},
        {"weight_sigma", [](Settings& s, auto& k, auto& v) { s.lk.weight_sigma = parse_real(v, k); }},
        {"iterations", [](Settings& s, auto& k, auto& v) { s.lk.iterations = parse_int(v, k); }},
        {"min_eigenvalue", [](Settings& s, auto& k, auto& v) { s.lk.min_eigenvalue = parse_real(v, k); }},
        {"max_residual", [](Settings& s, auto& k, auto& v) { s.lk.max_residual = parse_real(v, k); }},
        {"levels", [](Settings& s, auto& k, auto& v) { s.levels = parse_int(v, k); }},
        {"scale", [](Settings& s, auto& k, auto& v) { s.scale = parse_real(v, k); }},
        {"weight_floor", [](Settings& s, auto& k, auto& v) { s.weight_floor = parse_real(v, k); }},
        {"realizations", [](Settings& s, auto& k, auto& v) { s.realizations = parse_int(v, k); }},
        {"alpha", [](Settings& s, auto& k, auto& v) { s.alpha = parse_real(v, k); }},
        {"quota", [](Settings& s, auto& k, auto& v) { s.quota = parse_real(v, k); }},
        {"paired_noise", [](Settings& s, auto& k, auto& v) { s.paired_noise = parse_bool(v, k); }},
    };
    return table;
}

}  // namespace

void apply(const KeyValues& kv, Settings& s) {
    for (const auto& [key, value] : kv) {
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError("unknown config key '" + key + "'");
        it->second(s, key, value);
    }
}

std::string config_keys_help() {
    std::string out;
    for (const auto& entry : setters()) out += "  " + entry.first + "\n";
    return out;
}

EstimatorConfig estimator_config(const Settings& s, Method method, const ConfidenceModel* model) {
    EstimatorConfig c;
    c.method = method;
    c.levels = s.levels;
    c.scale = s.scale;
    c.lk = s.lk;
    c.weight_floor = s.weight_floor;
    if (method == Method::parallel) {
        if (model == nullptr) throw DomainError("the parallel method needs a confidence model (--model)");
        c.model = *model;
        if (c.model.levels < c.levels) {
            throw DomainError("model was fitted for L=" + std::to_string(c.model.levels) + " but L=" +
                              std::to_string(c.levels) + " was requested");
        }
        // A model fitted on more levels serves any smaller L: mu_l does not depend on L.
        c.model.levels = c.levels;
    }
    validate(c);
    return c;
}

SpeedSweep sweep_from(const Settings& s, std::uint64_t seed, int jobs) {
    SpeedSweep sw = default_sweep();
    sw.realizations = s.realizations;
    sw.noise_sigma = s.stimulus.noise_sigma;
    sw.direction = s.direction;
    sw.stimulus = s.stimulus;
    sw.seed = seed;
    sw.jobs = jobs;
    return sw;
}

DiscriminationParams discrimination_from(const Settings& s, std::uint64_t seed, int jobs) {
    DiscriminationParams p;
    p.alpha = s.alpha;
    p.deltas = default_deltas();
    p.realizations = s.realizations;
    p.quota = s.quota;
    p.stimulus = s.stimulus;
    p.direction = s.direction;
    p.noise_sigma = s.stimulus.noise_sigma;
    p.paired_noise = s.paired_noise;
    p.seed = seed;
    p.jobs = jobs;
    return p;
}

}  // namespace msflow::cli
