#include "msflow/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace msflow {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t begin = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw ParseError(std::string("PGM header: ") + what + " too large");
            ++pos_;
        }
        if (pos_ == begin) throw ParseError(std::string("PGM header: expected ") + what);
        return value;
    }

    std::size_t pos() const { return pos_; }
    void advance() { ++pos_; }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Frame load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError(path.string() + ": not a binary PGM (missing P5 magic)");
    }
    HeaderReader header(bytes);
    header.advance();
    header.advance();
    const long width = header.read_uint("width");
    const long height = header.read_uint("height");
    const long maxval = header.read_uint("maxval");
    if (width <= 0 || height <= 0) throw ParseError(path.string() + ": zero image dimension");
    if (maxval <= 0 || maxval > 65535) throw ParseError(path.string() + ": maxval out of range");
    if (header.pos() >= bytes.size() || !std::isspace(bytes[header.pos()])) {
        throw ParseError(path.string() + ": missing whitespace after maxval");
    }
    header.advance();

    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t payload = bytes.size() - header.pos();
    if (payload < count * sample_bytes) {
        throw IoError(path.string() + ": truncated payload (" + std::to_string(payload) + " of " +
                      std::to_string(count * sample_bytes) + " bytes)");
    }

    std::vector<double> data(count);
    const auto* p = bytes.data() + header.pos();
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < count; ++i) {
        unsigned sample = p[i * sample_bytes];
        if (sample_bytes == 2) sample = (sample << 8) | p[i * sample_bytes + 1];
        data[i] = std::min(static_cast<double>(sample) * scale, 1.0);
    }
    return Frame(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void save_pgm(const Frame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    std::vector<char> payload(frame.size());
    std::ranges::transform(frame.pixels(), payload.begin(), [](double v) {
        const double q = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
        return static_cast<char>(static_cast<unsigned char>(q));
    });
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {
std::filesystem::path frame_path(const std::filesystem::path& dir, std::size_t index) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%05zu.pgm", index);
    return dir / name;
}
}  // namespace

void save_sequence(const FrameSequence& frames, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < frames.size(); ++i) save_pgm(frames[i], frame_path(dir, i));
}

FrameSequence load_sequence(const std::filesystem::path& dir) {
    FrameSequence frames;
    for (std::size_t i = 0;; ++i) {
        const auto path = frame_path(dir, i);
        if (!std::filesystem::exists(path)) break;
        frames.push_back(load_pgm(path));
        if (!frames.back().same_shape(frames.front())) {
            throw DomainError(path.string() + ": frame size differs from frame_00000.pgm");
        }
    }
    if (frames.empty()) throw IoError("no frame_00000.pgm in " + dir.string());
    return frames;
}

}  // namespace msflow
