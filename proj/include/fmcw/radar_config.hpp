#ifndef FMCW_RADAR_CONFIG_HPP
#define FMCW_RADAR_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fmcw {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, vacuum

enum class AdcMode : std::uint8_t { real = 0, complex = 1 };

inline std::string to_string(AdcMode m) { return m == AdcMode::real ? "real" : "complex"; }

inline AdcMode adc_mode_from_string(const std::string& s) {
    if (s == "real") return AdcMode::real;
    if (s == "complex") return AdcMode::complex;
    throw std::invalid_argument("adc_mode must be \"real\" or \"complex\", got \"" + s + "\"");
}

/// Chirp/frame timing and RF parameters. Immutable after validation;
/// every derived quantity (slope, resolutions, limits, axes) is computed
/// from these fields by the free functions below.
struct RadarConfig {
    double f_low = 60e9;              // chirp start frequency [Hz]
    double bandwidth = 1.29685e9;     // f_high - f_low [Hz]
    double sample_rate = 2e6;         // ADC rate [Hz]
    std::uint32_t samples_per_chirp = 64;
    std::uint32_t chirps_per_frame = 64;
    double chirp_interval = 156.25e-6;  // chirp-start to chirp-start [s]
    double frame_rate = 20.0;           // [Hz]
    std::uint32_t zero_pad_size = 256;  // post-padding length per FFT axis
    AdcMode adc_mode = AdcMode::real;

    double chirp_active_duration() const {
        return static_cast<double>(samples_per_chirp) / sample_rate;
    }
};

/// Returns the list of violated invariants; empty iff the config is valid.
inline std::vector<std::string> validate(const RadarConfig& c) {
    std::vector<std::string> violations;
    if (!(c.f_low > 0)) violations.push_back("f_low > 0");
    if (!(c.bandwidth > 0)) violations.push_back("bandwidth > 0");
    if (!(c.sample_rate > 0)) violations.push_back("sample_rate > 0");
    if (c.samples_per_chirp == 0) violations.push_back("samples_per_chirp > 0");
    if (c.chirps_per_frame == 0) violations.push_back("chirps_per_frame > 0");
    if (!(c.chirp_interval > 0)) violations.push_back("chirp_interval > 0");
    if (!(c.frame_rate > 0)) violations.push_back("frame_rate > 0");
    if (c.sample_rate > 0 && c.samples_per_chirp > 0 &&
        !(c.chirp_active_duration() <= c.chirp_interval))
        violations.push_back("T_c <= T_s");
    if (c.chirp_interval > 0 && c.frame_rate > 0 &&
        !(c.chirps_per_frame * c.chirp_interval <= 1.0 / c.frame_rate))
        violations.push_back("N * T_s <= 1 / frame_rate");
    if (c.zero_pad_size < c.samples_per_chirp) violations.push_back("zero_pad_size >= samples_per_chirp");
    if (c.zero_pad_size < c.chirps_per_frame) violations.push_back("zero_pad_size >= chirps_per_frame");
    return violations;
}

inline bool is_valid(const RadarConfig& c) { return validate(c).empty(); }

/// Chirp slope S = B / T_c [Hz/s].
inline double chirp_slope(const RadarConfig& c) {
    return c.bandwidth / c.chirp_active_duration();
}

/// Carrier wavelength, taken at the chirp start frequency.
inline double wavelength(const RadarConfig& c) { return kSpeedOfLight / c.f_low; }

/// d_min = c / (2B).
inline double range_resolution(const RadarConfig& c) {
    return kSpeedOfLight / (2.0 * c.bandwidth);
}

/// Maximum unambiguous range set by the ADC Nyquist bound on the beat
/// frequency: fs/2 usable in real mode, fs in complex mode.
inline double max_range(const RadarConfig& c) {
    double s = chirp_slope(c);
    double denom = (c.adc_mode == AdcMode::real) ? 4.0 : 2.0;
    return kSpeedOfLight * c.sample_rate / (denom * s);
}

/// Maximum unambiguous radial velocity, lambda / (4 T_s).
inline double max_velocity(const RadarConfig& c) {
    return wavelength(c) / (4.0 * c.chirp_interval);
}

/// v_min = lambda / (2 T_s N).
inline double velocity_resolution(const RadarConfig& c) {
    return wavelength(c) / (2.0 * c.chirp_interval * c.chirps_per_frame);
}

/// Theta_min = 2 / N for an N-element receive array.
inline double angular_resolution(std::uint32_t antenna_count) {
    if (antenna_count == 0) throw std::invalid_argument("antenna_count must be >= 1");
    return 2.0 / static_cast<double>(antenna_count);
}

inline std::size_t range_bin_count(const RadarConfig& c) {
    return c.adc_mode == AdcMode::real ? c.zero_pad_size / 2 : c.zero_pad_size;
}

/// Physical range per range bin (post zero-padding).
inline std::vector<double> range_axis(const RadarConfig& c) {
    std::size_t n = range_bin_count(c);
    double step = max_range(c) / static_cast<double>(n);
    std::vector<double> axis(n);
    for (std::size_t k = 0; k < n; ++k) axis[k] = static_cast<double>(k) * step;
    return axis;
}

/// Physical velocity per Doppler bin, zero-centered at index pad/2.
inline std::vector<double> velocity_axis(const RadarConfig& c) {
    std::size_t n = c.zero_pad_size;
    double step = 2.0 * max_velocity(c) / static_cast<double>(n);
    std::vector<double> axis(n);
    for (std::size_t j = 0; j < n; ++j)
        axis[j] = (static_cast<double>(j) - static_cast<double>(n) / 2.0) * step;
    return axis;
}

inline nlohmann::json to_json(const RadarConfig& c) {
    return nlohmann::json{{"f_low", c.f_low},
                          {"bandwidth", c.bandwidth},
                          {"sample_rate", c.sample_rate},
                          {"samples_per_chirp", c.samples_per_chirp},
                          {"chirps_per_frame", c.chirps_per_frame},
                          {"chirp_interval", c.chirp_interval},
                          {"frame_rate", c.frame_rate},
                          {"zero_pad_size", c.zero_pad_size},
                          {"adc_mode", to_string(c.adc_mode)}};
}

inline RadarConfig config_from_json(const nlohmann::json& j) {
    RadarConfig c;
    c.f_low = j.at("f_low").get<double>();
    c.bandwidth = j.at("bandwidth").get<double>();
    c.sample_rate = j.at("sample_rate").get<double>();
    c.samples_per_chirp = j.at("samples_per_chirp").get<std::uint32_t>();
    c.chirps_per_frame = j.at("chirps_per_frame").get<std::uint32_t>();
    c.chirp_interval = j.at("chirp_interval").get<double>();
    c.frame_rate = j.at("frame_rate").get<double>();
    c.zero_pad_size = j.at("zero_pad_size").get<std::uint32_t>();
    if (j.contains("adc_mode")) c.adc_mode = adc_mode_from_string(j.at("adc_mode").get<std::string>());
    return c;
}

}  // namespace fmcw

#endif
