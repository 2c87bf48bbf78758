#ifndef FMCW_DSP_HPP
#define FMCW_DSP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "matrix.hpp"
#include "radar_config.hpp"
#include "scene.hpp"

namespace fmcw {

using ComplexMatrix = Matrix<std::complex<double>>;

/// Magnitude spectrum over (velocity bin, range bin) with physical axes.
/// Rows are Doppler (zero velocity at row zero_pad_size/2), columns range.
struct RangeDopplerMap {
    Matrix<double> magnitude;
    ComplexMatrix complex_spectrum;  // retained for diagnostics
    std::vector<double> range_axis;     // m per column
    std::vector<double> velocity_axis;  // m/s per row
    double timestamp = 0.0;
    std::uint32_t frame_index = 0;
};

/// Subtracts the arithmetic mean of each chirp row.
inline ComplexMatrix dc_removal(const ComplexMatrix& frame) {
    ComplexMatrix out = frame;
    for (std::size_t r = 0; r < out.rows; ++r) {
        std::complex<double> mean(0.0, 0.0);
        for (std::size_t c = 0; c < out.cols; ++c) mean += out(r, c);
        mean /= static_cast<double>(out.cols);
        for (std::size_t c = 0; c < out.cols; ++c) out(r, c) -= mean;
    }
    return out;
}

/// Hanning taps, w[k] = 0.5 (1 - cos(2 pi k / (L - 1))).
inline std::vector<double> hanning(std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (length < 2) return w;
    for (std::size_t k = 0; k < length; ++k)
        w[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(k) /
                                     static_cast<double>(length - 1)));
    return w;
}

/// Hanning window along fast-time, then along slow-time.
inline ComplexMatrix apply_window(const ComplexMatrix& frame) {
    ComplexMatrix out = frame;
    std::vector<double> w_fast = hanning(out.cols);
    std::vector<double> w_slow = hanning(out.rows);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c) out(r, c) *= w_fast[c] * w_slow[r];
    return out;
}

/// Embeds the frame at the origin of a pad x pad matrix.
inline ComplexMatrix zero_pad(const ComplexMatrix& frame, std::size_t pad) {
    if (pad < frame.rows || pad < frame.cols)
        throw std::invalid_argument("zero_pad: pad size smaller than frame dimensions");
    ComplexMatrix out(pad, pad);
    for (std::size_t r = 0; r < frame.rows; ++r)
        for (std::size_t c = 0; c < frame.cols; ++c) out(r, c) = frame(r, c);
    return out;
}

/// DFT along fast-time per chirp. Real mode keeps bins 0 .. pad/2 - 1.
inline ComplexMatrix range_spectrum(const ComplexMatrix& padded, AdcMode mode) {
    std::size_t keep = mode == AdcMode::real ? padded.cols / 2 : padded.cols;
    ComplexMatrix out(padded.rows, keep);
    std::vector<std::complex<double>> row(padded.cols);
    for (std::size_t r = 0; r < padded.rows; ++r) {
        for (std::size_t c = 0; c < padded.cols; ++c) row[c] = padded(r, c);
        fft(row);
        for (std::size_t c = 0; c < keep; ++c) out(r, c) = row[c];
    }
    return out;
}

/// DFT along slow-time per range column, rotated so zero velocity lands on
/// the center row (row n/2 holds DFT bin 0).
inline ComplexMatrix doppler_spectrum(const ComplexMatrix& range_spec) {
    const std::size_t n = range_spec.rows;
    ComplexMatrix out(n, range_spec.cols);
    std::vector<std::complex<double>> col(n);
    for (std::size_t c = 0; c < range_spec.cols; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = range_spec(r, c);
        fft(col);
        for (std::size_t r = 0; r < n; ++r) out(r, c) = col[(r + n / 2) % n];
    }
    return out;
}

/// Full chain: DC removal, Hanning window, zero-pad, range FFT, Doppler FFT,
/// magnitude, with config-derived axes attached.
inline RangeDopplerMap process_frame(const RadarConfig& config, const RawFrame& frame) {
    if (frame.samples.rows != config.chirps_per_frame ||
        frame.samples.cols != config.samples_per_chirp)
        throw std::invalid_argument("process_frame: frame dimensions do not match config");
    ComplexMatrix spec = doppler_spectrum(range_spectrum(
        zero_pad(apply_window(dc_removal(frame.samples)), config.zero_pad_size),
        config.adc_mode));
    RangeDopplerMap map;
    map.magnitude = Matrix<double>(spec.rows, spec.cols);
    for (std::size_t i = 0; i < spec.size(); ++i) map.magnitude.data[i] = std::abs(spec.data[i]);
    map.complex_spectrum = std::move(spec);
    map.range_axis = range_axis(config);
    map.velocity_axis = velocity_axis(config);
    map.timestamp = frame.timestamp;
    map.frame_index = frame.frame_index;
    return map;
}

/// Map magnitudes in dB relative to the global max, clamped at floor_db.
inline Matrix<double> magnitude_db(const RangeDopplerMap& map, double floor_db) {
    if (!(floor_db < 0)) throw std::invalid_argument("magnitude_db: floor_db must be < 0");
    double peak = *std::max_element(map.magnitude.data.begin(), map.magnitude.data.end());
    Matrix<double> out(map.magnitude.rows, map.magnitude.cols, floor_db);
    if (peak <= 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double m = map.magnitude.data[i];
        out.data[i] = m <= 0.0 ? floor_db
                               : std::max(floor_db, 20.0 * std::log10(m / peak));
    }
    return out;
}

}  // namespace fmcw

#endif
