#ifndef FMCW_SCENE_HPP
#define FMCW_SCENE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matrix.hpp"
#include "radar_config.hpp"
#include "rng.hpp"

namespace fmcw {

enum class ScattererKind : std::uint8_t { target, boundary, ground };

/// Point reflector. Position is in the ego frame (x lateral, y boresight);
/// velocity is in the world frame. Amplitude is reference reflectivity at 1 m.
struct Scatterer {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double amplitude = 1.0;
    ScattererKind kind = ScattererKind::target;
};

struct EgoSpeedKnot {
    double t = 0.0;      // [s]
    double speed = 0.0;  // [m/s] along boresight
};

struct BoundaryWalls {
    double offset_left = -1.0;  // lateral wall positions [m]
    double offset_right = 1.0;
    double spacing = 0.5;  // scatterer spacing along each wall [m]
    double extent = 3.0;   // wall length ahead of the radar [m]
    double amplitude = 0.1;
};

struct GroundClutter {
    std::uint32_t count = 0;
    double max_range = 1.0;  // [m]
    double amplitude = 0.05;
};

struct Scenario {
    double duration = 1.0;  // [s]
    std::vector<EgoSpeedKnot> ego_speed;  // piecewise-linear profile; empty = stationary
    std::vector<Scatterer> targets;
    std::optional<BoundaryWalls> boundary_walls;
    std::optional<GroundClutter> ground_clutter;
    double noise_std = 0.0;  // linear amplitude per sample
    std::uint64_t rng_seed = 0;
};

/// One frame of beat-signal samples, chirps x samples. Imaginary parts are
/// zero when the config's adc_mode is real.
struct RawFrame {
    Matrix<std::complex<double>> samples;
    double timestamp = 0.0;
    std::uint32_t frame_index = 0;
};

struct GroundTruthPoint {
    double timestamp = 0.0;
    double range = 0.0;
    double radial_velocity = 0.0;  // positive = receding
    bool in_range = true;
};

inline std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> violations;
    if (!(s.duration > 0)) violations.push_back("duration > 0");
    if (!(s.noise_std >= 0)) violations.push_back("noise_std >= 0");
    if (s.boundary_walls && !(s.boundary_walls->spacing > 0))
        violations.push_back("wall spacing > 0");
    for (const auto& sc : s.targets)
        if (!(sc.amplitude >= 0)) violations.push_back("scatterer amplitude >= 0");
    return violations;
}

/// Ego speed at time t, linearly interpolated and clamped at the profile ends.
inline double ego_speed_at(const Scenario& s, double t) {
    const auto& knots = s.ego_speed;
    if (knots.empty()) return 0.0;
    if (t <= knots.front().t) return knots.front().speed;
    if (t >= knots.back().t) return knots.back().speed;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (t <= knots[i].t) {
            double span = knots[i].t - knots[i - 1].t;
            if (span <= 0) return knots[i].speed;
            double a = (t - knots[i - 1].t) / span;
            return knots[i - 1].speed + a * (knots[i].speed - knots[i - 1].speed);
        }
    }
    return knots.back().speed;
}

/// Ego displacement along boresight from t = 0 to t (exact piecewise-linear
/// integral of the speed profile).
inline double ego_displacement(const Scenario& s, double t) {
    const auto& knots = s.ego_speed;
    if (knots.empty()) return 0.0;
    double disp = 0.0;
    double prev_t = 0.0;
    double prev_v = ego_speed_at(s, 0.0);
    for (const auto& k : knots) {
        if (k.t <= prev_t) continue;
        double seg_end = std::min(k.t, t);
        if (seg_end > prev_t) {
            double v_end = ego_speed_at(s, seg_end);
            disp += 0.5 * (prev_v + v_end) * (seg_end - prev_t);
            prev_t = seg_end;
            prev_v = v_end;
        }
        if (k.t >= t) break;
    }
    if (t > prev_t) disp += knots.back().speed * (t - prev_t);
    return disp;
}

struct RadialGeometry {
    double range = 0.0;
    double radial_velocity = 0.0;  // positive = receding
    double angle = 0.0;            // off boresight, signed [rad]
};

/// Line-of-sight range/velocity/angle of a scatterer as seen by an ego
/// vehicle moving at ego_speed along boresight. A static world point at
/// angle theta acquires radial velocity -ego_speed * cos(theta).
inline RadialGeometry radial_geometry(const Scatterer& sc, double ego_speed) {
    RadialGeometry g;
    g.range = std::hypot(sc.x, sc.y);
    if (g.range <= 0.0) return g;
    double rel_vx = sc.vx;
    double rel_vy = sc.vy - ego_speed;
    g.radial_velocity = (rel_vx * sc.x + rel_vy * sc.y) / g.range;
    g.angle = std::atan2(sc.x, sc.y);
    return g;
}

/// IF sample for one scatterer at chirp m, fast-time sample n. Stop-and-hop:
/// the beat frequency is held at the frame-start range (the range-FFT
/// position is unchanged across chirps) while the carrier phase advances
/// with the chirp-to-chirp delay. Amplitude follows a 1/d^2 law in signal
/// amplitude, clamped below 0.05 m.
inline std::complex<double> beat_sample(const RadarConfig& c, double range,
                                        double radial_velocity, double amplitude,
                                        std::uint32_t chirp, std::uint32_t sample) {
    double tau0 = 2.0 * range / kSpeedOfLight;
    double d_m = range + radial_velocity * static_cast<double>(chirp) * c.chirp_interval;
    double tau_m = 2.0 * d_m / kSpeedOfLight;
    double t_n = static_cast<double>(sample) / c.sample_rate;
    double phase = 2.0 * M_PI * chirp_slope(c) * tau0 * t_n + 2.0 * M_PI * c.f_low * tau_m;
    double a = amplitude / (std::max(range, 0.05) * std::max(range, 0.05));
    if (c.adc_mode == AdcMode::real) return {a * std::cos(phase), 0.0};
    return std::polar(a, phase);
}

/// Boundary-wall and ground scatterers for a scenario. Ground points are
/// placed uniformly (seeded by rng_seed) within the clutter max range.
inline std::vector<Scatterer> build_track_clutter(const Scenario& s) {
    std::vector<Scatterer> out;
    if (s.boundary_walls) {
        const auto& w = *s.boundary_walls;
        for (double offset : {w.offset_left, w.offset_right}) {
            for (double y = 0.0; y <= w.extent + 1e-12; y += w.spacing) {
                Scatterer sc;
                sc.x = offset;
                sc.y = y;
                sc.amplitude = w.amplitude;
                sc.kind = ScattererKind::boundary;
                out.push_back(sc);
            }
        }
    }
    if (s.ground_clutter && s.ground_clutter->count > 0) {
        Rng rng(s.rng_seed ^ 0x67726e64u);  // independent of the noise stream
        for (std::uint32_t i = 0; i < s.ground_clutter->count; ++i) {
            double r = rng.uniform(0.05, s.ground_clutter->max_range);
            double theta = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
            Scatterer sc;
            sc.x = r * std::sin(theta);
            sc.y = r * std::cos(theta);
            sc.amplitude = s.ground_clutter->amplitude;
            sc.kind = ScattererKind::ground;
            out.push_back(sc);
        }
    }
    return out;
}

/// Superposition of beat signals from an explicit scatterer list, observed
/// at ego speed `ego`. Scatterers behind the radar or beyond 1.5x max range
/// are dropped. Noise (if any) is drawn row-major from `rng`.
inline RawFrame synthesize_from_scatterers(const RadarConfig& c,
                                           const std::vector<Scatterer>& scatterers,
                                           double ego, double t, std::uint32_t frame_index,
                                           double noise_std, Rng& rng) {
    RawFrame frame;
    frame.timestamp = t;
    frame.frame_index = frame_index;
    frame.samples = Matrix<std::complex<double>>(c.chirps_per_frame, c.samples_per_chirp);
    double range_cutoff = 1.5 * max_range(c);
    for (const auto& sc : scatterers) {
        if (sc.y <= 0.0 || sc.amplitude == 0.0) continue;
        RadialGeometry g = radial_geometry(sc, ego);
        if (g.range > range_cutoff) continue;
        for (std::uint32_t m = 0; m < c.chirps_per_frame; ++m)
            for (std::uint32_t n = 0; n < c.samples_per_chirp; ++n)
                frame.samples(m, n) += beat_sample(c, g.range, g.radial_velocity, sc.amplitude, m, n);
    }
    if (noise_std > 0.0) {
        bool complex_mode = c.adc_mode == AdcMode::complex;
        for (auto& v : frame.samples.data) {
            double re = v.real() + noise_std * rng.gaussian();
            double im = complex_mode ? v.imag() + noise_std * rng.gaussian() : 0.0;
            v = {re, im};
        }
    }
    return frame;
}

/// Target scatterer advanced to scene time t in the ego frame: world velocity
/// integrated, minus the ego's own boresight displacement.
inline Scatterer advance_target(const Scatterer& sc, const Scenario& s, double t) {
    Scatterer out = sc;
    out.x = sc.x + sc.vx * t;
    out.y = sc.y + sc.vy * t - ego_displacement(s, t);
    return out;
}

/// One raw frame of the scenario at scene time t. Targets are advanced to t;
/// boundary/ground clutter stays fixed in the ego frame (walls are modeled
/// as translation-invariant along the track).
inline RawFrame synthesize_frame(const RadarConfig& c, const Scenario& s, double t, Rng& rng,
                                 std::uint32_t frame_index = 0) {
    std::vector<Scatterer> scatterers = build_track_clutter(s);
    for (const auto& target : s.targets) scatterers.push_back(advance_target(target, s, t));
    return synthesize_from_scatterers(c, scatterers, ego_speed_at(s, t), t, frame_index,
                                      s.noise_std, rng);
}

struct SimulationRun {
    std::vector<RawFrame> frames;
    std::vector<GroundTruthPoint> truth;  // first target; empty when no targets
};

/// Full run: frames at 1/frame_rate spacing covering the scenario duration,
/// with ground truth for the first target logged at each frame timestamp.
inline SimulationRun simulate_run(const RadarConfig& c, const Scenario& s) {
    SimulationRun run;
    auto frame_count = static_cast<std::uint32_t>(std::llround(s.duration * c.frame_rate));
    double d_max = max_range(c);
    Rng rng(s.rng_seed);
    std::vector<Scatterer> clutter = build_track_clutter(s);
    run.frames.reserve(frame_count);
    for (std::uint32_t i = 0; i < frame_count; ++i) {
        double t = static_cast<double>(i) / c.frame_rate;
        std::vector<Scatterer> scatterers = clutter;
        for (const auto& target : s.targets) scatterers.push_back(advance_target(target, s, t));
        double ego = ego_speed_at(s, t);
        run.frames.push_back(
            synthesize_from_scatterers(c, scatterers, ego, t, i, s.noise_std, rng));
        if (!s.targets.empty()) {
            Scatterer tgt = advance_target(s.targets.front(), s, t);
            RadialGeometry g = radial_geometry(tgt, ego);
            run.truth.push_back({t, g.range, g.radial_velocity, g.range <= d_max});
        }
    }
    return run;
}

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json j;
    j["duration"] = s.duration;
    auto& ego = j["ego_speed"] = nlohmann::json::array();
    for (const auto& k : s.ego_speed) ego.push_back({k.t, k.speed});
    auto& targets = j["targets"] = nlohmann::json::array();
    for (const auto& sc : s.targets)
        targets.push_back({{"position", {sc.x, sc.y}},
                           {"velocity", {sc.vx, sc.vy}},
                           {"amplitude", sc.amplitude}});
    if (s.boundary_walls)
        j["boundary_walls"] = {{"offsets", {s.boundary_walls->offset_left, s.boundary_walls->offset_right}},
                               {"spacing", s.boundary_walls->spacing},
                               {"extent", s.boundary_walls->extent},
                               {"amplitude", s.boundary_walls->amplitude}};
    if (s.ground_clutter)
        j["ground_clutter"] = {{"count", s.ground_clutter->count},
                               {"max_range", s.ground_clutter->max_range},
                               {"amplitude", s.ground_clutter->amplitude}};
    j["noise_std"] = s.noise_std;
    j["rng_seed"] = s.rng_seed;
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.duration = j.at("duration").get<double>();
    if (j.contains("ego_speed")) {
        if (j["ego_speed"].is_number()) {
            s.ego_speed.push_back({0.0, j["ego_speed"].get<double>()});
        } else {
            for (const auto& k : j["ego_speed"])
                s.ego_speed.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
        }
    }
    if (j.contains("targets")) {
        for (const auto& tj : j["targets"]) {
            Scatterer sc;
            sc.x = tj.at("position").at(0).get<double>();
            sc.y = tj.at("position").at(1).get<double>();
            sc.vx = tj.at("velocity").at(0).get<double>();
            sc.vy = tj.at("velocity").at(1).get<double>();
            sc.amplitude = tj.value("amplitude", 1.0);
            sc.kind = ScattererKind::target;
            s.targets.push_back(sc);
        }
    }
    if (j.contains("boundary_walls")) {
        const auto& wj = j["boundary_walls"];
        BoundaryWalls w;
        w.offset_left = wj.at("offsets").at(0).get<double>();
        w.offset_right = wj.at("offsets").at(1).get<double>();
        w.spacing = wj.at("spacing").get<double>();
        w.extent = wj.at("extent").get<double>();
        w.amplitude = wj.value("amplitude", 0.1);
        s.boundary_walls = w;
    }
    if (j.contains("ground_clutter")) {
        const auto& gj = j["ground_clutter"];
        GroundClutter g;
        g.count = gj.at("count").get<std::uint32_t>();
        g.max_range = gj.at("max_range").get<double>();
        g.amplitude = gj.value("amplitude", 0.05);
        s.ground_clutter = g;
    }
    s.noise_std = j.value("noise_std", 0.0);
    s.rng_seed = j.value("rng_seed", std::uint64_t{0});
    return s;
}

}  // namespace fmcw

#endif
