#include "msflow/keyvalue.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace msflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, trim(t.substr(eq + 1))).second) {
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_key_values(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

double parse_real(const std::string& text, const std::string& key) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseError("'" + key + "': not a number: '" + text + "'");
    return value;
}

int parse_int(const std::string& text, const std::string& key) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseError("'" + key + "': not an integer: '" + text + "'");
    return value;
}

void write_model(const ConfidenceModel& model, std::ostream& out) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "mu0=%.17g\nsigma0=%.17g\nc=%.17g\nL=%d\n", model.mu0, model.sigma0, model.scale,
                  model.levels);
    out << buf;
}

void save_model(const ConfidenceModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_model(model, out);
    if (!out) throw IoError("failed writing " + path.string());
}

ConfidenceModel model_from_key_values(const KeyValues& kv) {
    auto need = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ParseError(std::string("model file: missing '") + key + "'");
        return it->second;
    };
    ConfidenceModel m;
    m.mu0 = parse_real(need("mu0"), "mu0");
    m.sigma0 = parse_real(need("sigma0"), "sigma0");
    m.scale = parse_real(need("c"), "c");
    m.levels = parse_int(need("L"), "L");
    validate(m);
    return m;
}

ConfidenceModel load_model(const std::filesystem::path& path) {
    return model_from_key_values(read_key_values(path));
}

}  // namespace msflow
