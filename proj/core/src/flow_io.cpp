#include "msflow/flow_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace msflow {

void write_flow_csv(const FlowField& flow, std::ostream& out) {
    out << "width,height\n" << flow.width() << ',' << flow.height() << "\nx,y,u,v,valid\n";
    char line[128];
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            const Vec2 v = flow.at(x, y);
            std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%d\n", x, y, v.u, v.v, flow.valid(x, y) ? 1 : 0);
            out << line;
        }
    }
}

void write_flow_csv(const FlowField& flow, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_flow_csv(flow, out);
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double to_double(const std::string& s, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("flow CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

}  // namespace

FlowField read_flow_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };

    if (!next_line() || line != "width,height") throw ParseError("flow CSV: missing 'width,height' header");
    if (!next_line()) throw ParseError("flow CSV: missing dimensions");
    const auto dims = split_commas(line);
    if (dims.size() != 2) throw ParseError("flow CSV: dimension line must have two fields");
    const int width = static_cast<int>(to_double(dims[0], line_no));
    const int height = static_cast<int>(to_double(dims[1], line_no));
    if (width < 0 || height < 0) throw ParseError("flow CSV: negative dimensions");
    if (!next_line() || line != "x,y,u,v,valid") throw ParseError("flow CSV: missing 'x,y,u,v,valid' header");

    FlowField flow(width, height);
    std::size_t rows = 0;
    while (next_line()) {
        const auto f = split_commas(line);
        if (f.size() != 5) throw ParseError("flow CSV line " + std::to_string(line_no) + ": expected 5 fields");
        const int x = static_cast<int>(to_double(f[0], line_no));
        const int y = static_cast<int>(to_double(f[1], line_no));
        if (x < 0 || y < 0 || x >= width || y >= height) {
            throw ParseError("flow CSV line " + std::to_string(line_no) + ": pixel outside the field");
        }
        if (f[4] != "0" && f[4] != "1") {
            throw ParseError("flow CSV line " + std::to_string(line_no) + ": valid must be 0 or 1");
        }
        flow.set(x, y, {to_double(f[2], line_no), to_double(f[3], line_no)}, f[4] == "1");
        ++rows;
    }
    if (rows != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ParseError("flow CSV: expected " + std::to_string(width * height) + " rows, got " +
                         std::to_string(rows));
    }
    return flow;
}

FlowField read_flow_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_flow_csv(in);
}

}  // namespace msflow
