#ifndef FMCW_DETECT_HPP
#define FMCW_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dsp.hpp"
#include "radar_config.hpp"

namespace fmcw {

struct DetectorOptions {
    std::uint32_t exclude_zero_doppler_rows = 1;  // rows each side of zero velocity
    std::uint32_t min_range_bins = 2;             // near-range columns removed
    bool parabolic_interpolation = false;
};

struct TrackPoint {
    double timestamp = 0.0;
    double range = 0.0;
    double radial_velocity = 0.0;
    double peak_magnitude = 0.0;
    bool in_range = true;
};

struct PeakBin {
    std::size_t doppler_row = 0;
    std::size_t range_col = 0;
    double magnitude = 0.0;
};

/// Max-energy cell over the non-excluded region. Ties go to the smaller
/// range column, then the smaller Doppler row.
inline PeakBin detect_peak(const RangeDopplerMap& map, const DetectorOptions& options) {
    const auto& mag = map.magnitude;
    if (mag.size() == 0) throw std::invalid_argument("detect_peak: empty map");
    std::size_t center = mag.rows / 2;
    std::size_t excl = options.exclude_zero_doppler_rows;
    // excl = 0 searches everything; excl = r removes the zero row and r rows each side
    std::size_t lo_row = center >= excl ? center - excl : 0;
    std::size_t hi_row = std::min(center + excl, mag.rows - 1);
    bool found = false;
    PeakBin best;
    for (std::size_t r = 0; r < mag.rows; ++r) {
        if (excl > 0 && r >= lo_row && r <= hi_row) continue;
        for (std::size_t c = options.min_range_bins; c < mag.cols; ++c) {
            double m = mag(r, c);
            bool better = !found || m > best.magnitude ||
                          (m == best.magnitude &&
                           (c < best.range_col || (c == best.range_col && r < best.doppler_row)));
            if (better) {
                best = {r, c, m};
                found = true;
            }
        }
    }
    if (!found) throw std::invalid_argument("detect_peak: exclusion zones leave no searchable cell");
    return best;
}

namespace detail {

// 3-point parabolic vertex offset in bins, clamped to [-0.5, 0.5].
inline double parabolic_offset(double left, double center, double right) {
    double denom = left - 2.0 * center + right;
    if (denom == 0.0) return 0.0;
    double delta = 0.5 * (left - right) / denom;
    return std::clamp(delta, -0.5, 0.5);
}

}  // namespace detail

struct PhysicalEstimate {
    double range = 0.0;
    double radial_velocity = 0.0;
};

/// Axis lookup for a peak bin; optional sub-bin refinement by a 3-point
/// parabola on the log-free magnitudes (skipped at map edges).
inline PhysicalEstimate bins_to_physical(const RangeDopplerMap& map, std::size_t doppler_row,
                                         std::size_t range_col, const DetectorOptions& options) {
    const auto& mag = map.magnitude;
    if (doppler_row >= mag.rows || range_col >= mag.cols)
        throw std::invalid_argument("bins_to_physical: indices out of bounds");
    double row = static_cast<double>(doppler_row);
    double col = static_cast<double>(range_col);
    if (options.parabolic_interpolation) {
        if (doppler_row > 0 && doppler_row + 1 < mag.rows)
            row += detail::parabolic_offset(mag(doppler_row - 1, range_col),
                                            mag(doppler_row, range_col),
                                            mag(doppler_row + 1, range_col));
        if (range_col > 0 && range_col + 1 < mag.cols)
            col += detail::parabolic_offset(mag(doppler_row, range_col - 1),
                                            mag(doppler_row, range_col),
                                            mag(doppler_row, range_col + 1));
    }
    double range_step = map.range_axis.size() > 1 ? map.range_axis[1] - map.range_axis[0] : 0.0;
    double vel_step =
        map.velocity_axis.size() > 1 ? map.velocity_axis[1] - map.velocity_axis[0] : 0.0;
    PhysicalEstimate est;
    est.range = map.range_axis.front() + col * range_step;
    est.radial_velocity = map.velocity_axis.front() + row * vel_step;
    return est;
}

/// Sets in_range = (range <= max_range), values untouched.
inline TrackPoint gate(TrackPoint point, const RadarConfig& config) {
    point.in_range = point.range <= max_range(config);
    return point;
}

/// Independent per-frame peak detection over a run of maps; no temporal
/// smoothing, input order preserved.
inline std::vector<TrackPoint> track_run(const std::vector<RangeDopplerMap>& maps,
                                         const DetectorOptions& options,
                                         const RadarConfig& config) {
    std::vector<TrackPoint> out;
    out.reserve(maps.size());
    for (const auto& map : maps) {
        PeakBin peak = detect_peak(map, options);
        PhysicalEstimate est = bins_to_physical(map, peak.doppler_row, peak.range_col, options);
        TrackPoint point;
        point.timestamp = map.timestamp;
        point.range = est.range;
        point.radial_velocity = est.radial_velocity;
        point.peak_magnitude = peak.magnitude;
        out.push_back(gate(point, config));
    }
    return out;
}

}  // namespace fmcw

#endif
