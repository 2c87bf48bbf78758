#ifndef FMCW_IO_HPP
#define FMCW_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "detect.hpp"
#include "dsp.hpp"
#include "eval.hpp"
#include "radar_config.hpp"
#include "scene.hpp"

namespace fmcw {

/// Malformed or truncated input; message names the failing byte offset for
/// binary formats.
class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr char kFrameLogMagic[4] = {'F', 'M', 'R', 'D'};
inline constexpr std::uint16_t kFrameLogVersion = 1;

// Little-endian primitives, independent of host byte order.
inline void put_bytes(std::string& buf, const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
}

inline void put_u16(std::string& buf, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    buf.append(b, 2);
}

inline void put_u32(std::string& buf, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    buf.append(b, 4);
}

inline void put_f32(std::string& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(buf, bits);
}

inline void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    buf.append(b, 8);
}

class ByteReader {
   public:
    ByteReader(std::string data, std::string path)
        : data_(std::move(data)), path_(std::move(path)) {}

    std::size_t offset() const { return pos_; }

    const char* take(std::size_t n, const char* what) {
        if (pos_ + n > data_.size())
            throw FormatError(path_ + ": truncated while reading " + std::string(what) +
                              " at byte offset " + std::to_string(pos_));
        const char* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }

    std::uint16_t u16(const char* what) {
        const auto* p = reinterpret_cast<const unsigned char*>(take(2, what));
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    std::uint32_t u32(const char* what) {
        const auto* p = reinterpret_cast<const unsigned char*>(take(4, what));
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    }

    float f32(const char* what) {
        std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    double f64(const char* what) {
        std::uint64_t bits = 0;
        const auto* p = reinterpret_cast<const unsigned char*>(take(8, what));
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

   private:
    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error(path + ": write failed");
}

// Locale-independent formatting, 9 significant digits.
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline double parse_double(const std::string& s, const std::string& path) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw FormatError(path + ": bad numeric field \"" + s + "\"");
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

/// Binary frame log: "FMRD" magic, u16 version, full RadarConfig, u32 frame
/// count, then per frame an f64 timestamp and row-major f32 samples
/// (re,im interleaved in complex mode). Little-endian throughout.
inline void write_frame_log(const std::string& path, const RadarConfig& config,
                            const std::vector<RawFrame>& frames) {
    auto violations = validate(config);
    if (!violations.empty())
        throw std::invalid_argument("write_frame_log: invalid config: " + violations.front());
    bool complex_mode = config.adc_mode == AdcMode::complex;
    std::string buf;
    detail::put_bytes(buf, detail::kFrameLogMagic, 4);
    detail::put_u16(buf, detail::kFrameLogVersion);
    detail::put_f64(buf, config.f_low);
    detail::put_f64(buf, config.bandwidth);
    detail::put_f64(buf, config.sample_rate);
    detail::put_u32(buf, config.samples_per_chirp);
    detail::put_u32(buf, config.chirps_per_frame);
    detail::put_f64(buf, config.chirp_interval);
    detail::put_f64(buf, config.frame_rate);
    detail::put_u32(buf, config.zero_pad_size);
    buf.push_back(static_cast<char>(config.adc_mode));
    detail::put_u32(buf, static_cast<std::uint32_t>(frames.size()));
    for (const auto& frame : frames) {
        if (frame.samples.rows != config.chirps_per_frame ||
            frame.samples.cols != config.samples_per_chirp)
            throw std::invalid_argument("write_frame_log: frame dimensions do not match config");
        detail::put_f64(buf, frame.timestamp);
        for (const auto& v : frame.samples.data) {
            detail::put_f32(buf, static_cast<float>(v.real()));
            if (complex_mode) detail::put_f32(buf, static_cast<float>(v.imag()));
        }
    }
    detail::write_file(path, buf);
}

inline std::pair<RadarConfig, std::vector<RawFrame>> read_frame_log(const std::string& path) {
    detail::ByteReader r(detail::read_file(path), path);
    const char* magic = r.take(4, "magic");
    if (std::memcmp(magic, detail::kFrameLogMagic, 4) != 0)
        throw FormatError(path + ": bad magic at byte offset 0");
    std::uint16_t version = r.u16("version");
    if (version != detail::kFrameLogVersion)
        throw FormatError(path + ": unsupported format version " + std::to_string(version) +
                          " at byte offset 4");
    RadarConfig config;
    config.f_low = r.f64("f_low");
    config.bandwidth = r.f64("bandwidth");
    config.sample_rate = r.f64("sample_rate");
    config.samples_per_chirp = r.u32("samples_per_chirp");
    config.chirps_per_frame = r.u32("chirps_per_frame");
    config.chirp_interval = r.f64("chirp_interval");
    config.frame_rate = r.f64("frame_rate");
    config.zero_pad_size = r.u32("zero_pad_size");
    std::uint8_t mode = static_cast<std::uint8_t>(*r.take(1, "adc_mode"));
    if (mode > 1)
        throw FormatError(path + ": bad adc_mode at byte offset " + std::to_string(r.offset() - 1));
    config.adc_mode = static_cast<AdcMode>(mode);
    auto violations = validate(config);
    if (!violations.empty())
        throw FormatError(path + ": embedded config invalid: " + violations.front());
    bool complex_mode = config.adc_mode == AdcMode::complex;
    std::uint32_t count = r.u32("frame count");
    std::vector<RawFrame> frames;
    frames.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        RawFrame frame;
        frame.timestamp = r.f64("frame timestamp");
        frame.frame_index = i;
        frame.samples = Matrix<std::complex<double>>(config.chirps_per_frame,
                                                     config.samples_per_chirp);
        for (auto& v : frame.samples.data) {
            double re = r.f32("sample");
            double im = complex_mode ? r.f32("sample") : 0.0;
            v = {re, im};
        }
        frames.push_back(std::move(frame));
    }
    return {config, std::move(frames)};
}

inline void write_truth_csv(const std::string& path, const std::vector<GroundTruthPoint>& truth) {
    std::string buf = "timestamp_s,range_m,radial_velocity_mps,in_range\n";
    for (const auto& p : truth)
        buf += detail::fmt_g9(p.timestamp) + "," + detail::fmt_g9(p.range) + "," +
               detail::fmt_g9(p.radial_velocity) + "," + (p.in_range ? "1" : "0") + "\n";
    detail::write_file(path, buf);
}

inline void write_track_csv(const std::string& path, const std::vector<TrackPoint>& tracks) {
    std::string buf = "timestamp_s,range_m,radial_velocity_mps,peak_magnitude,in_range\n";
    for (const auto& p : tracks)
        buf += detail::fmt_g9(p.timestamp) + "," + detail::fmt_g9(p.range) + "," +
               detail::fmt_g9(p.radial_velocity) + "," + detail::fmt_g9(p.peak_magnitude) + "," +
               (p.in_range ? "1" : "0") + "\n";
    detail::write_file(path, buf);
}

inline std::vector<TrackPoint> read_track_csv(const std::string& path) {
    std::istringstream in(detail::read_file(path));
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": empty track CSV");
    std::vector<TrackPoint> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 5) throw FormatError(path + ": expected 5 track CSV fields");
        TrackPoint p;
        p.timestamp = detail::parse_double(f[0], path);
        p.range = detail::parse_double(f[1], path);
        p.radial_velocity = detail::parse_double(f[2], path);
        p.peak_magnitude = detail::parse_double(f[3], path);
        p.in_range = f[4] != "0";
        out.push_back(p);
    }
    return out;
}

/// Reads ground truth. Accepts the simulator truth schema
/// (timestamp_s,range_m,radial_velocity_mps,in_range) or an odometry log
/// (timestamp_s,speed_mps[,range_m]); without a range column the range is
/// integrated from initial_distance.
inline std::vector<GroundTruthPoint> read_truth_csv(const std::string& path,
                                                    double initial_distance = 0.0) {
    std::istringstream in(detail::read_file(path));
    std::string header;
    if (!std::getline(in, header)) throw FormatError(path + ": empty truth CSV");
    auto cols = detail::split_csv_line(header);
    std::string line;
    if (cols.size() == 4 && cols[1] == "range_m") {
        std::vector<GroundTruthPoint> out;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = detail::split_csv_line(line);
            if (f.size() != 4) throw FormatError(path + ": expected 4 truth CSV fields");
            out.push_back({detail::parse_double(f[0], path), detail::parse_double(f[1], path),
                           detail::parse_double(f[2], path), f[3] != "0"});
        }
        return out;
    }
    if (cols.size() >= 2 && cols[1] == "speed_mps") {
        bool has_range = cols.size() >= 3 && cols[2] == "range_m";
        std::vector<std::pair<double, double>> speeds;
        std::vector<GroundTruthPoint> direct;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = detail::split_csv_line(line);
            double t = detail::parse_double(f[0], path);
            double v = detail::parse_double(f[1], path);
            if (has_range && f.size() >= 3)
                direct.push_back({t, detail::parse_double(f[2], path), v, true});
            else
                speeds.emplace_back(t, v);
        }
        return has_range ? direct : truth_from_odometry(speeds, initial_distance);
    }
    throw FormatError(path + ": unrecognized truth CSV header \"" + header + "\"");
}

/// Map CSV: two axis header rows, then the magnitude matrix row-major.
inline void write_map_csv(const std::string& path, const RangeDopplerMap& map) {
    std::string buf = "range_m";
    for (double r : map.range_axis) buf += "," + detail::fmt_g9(r);
    buf += "\nvelocity_mps";
    for (double v : map.velocity_axis) buf += "," + detail::fmt_g9(v);
    buf += "\n";
    for (std::size_t r = 0; r < map.magnitude.rows; ++r) {
        for (std::size_t c = 0; c < map.magnitude.cols; ++c) {
            if (c) buf += ",";
            buf += detail::fmt_g9(map.magnitude(r, c));
        }
        buf += "\n";
    }
    detail::write_file(path, buf);
}

/// 8-bit binary PGM of the dB map, [floor_db, 0] scaled to [0, 255].
inline void write_map_pgm(const std::string& path, const RangeDopplerMap& map, double floor_db) {
    Matrix<double> db = magnitude_db(map, floor_db);
    std::string buf = "P5\n" + std::to_string(db.cols) + " " + std::to_string(db.rows) + "\n255\n";
    for (double v : db.data) {
        double scaled = (v - floor_db) / (0.0 - floor_db) * 255.0;
        int pixel = static_cast<int>(std::lround(std::clamp(scaled, 0.0, 255.0)));
        buf.push_back(static_cast<char>(pixel));
    }
    detail::write_file(path, buf);
}

inline RadarConfig load_config(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(detail::read_file(path));
    return config_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(detail::read_file(path));
    return scenario_from_json(j);
}

}  // namespace fmcw

#endif
