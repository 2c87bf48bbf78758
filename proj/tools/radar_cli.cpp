// Command-line front end for the FMCW simulation and estimation library:
// scenario synthesis, range-doppler processing, peak tracking, and RMSE
// evaluation against ground truth.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmcw/detect.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/eval.hpp"
#include "fmcw/io.hpp"
#include "fmcw/radar_config.hpp"
#include "fmcw/scene.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string run_suffix(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", k);
    return buf;
}

fmcw::RadarConfig load_valid_config(const std::string& path) {
    fmcw::RadarConfig config = fmcw::load_config(path);
    auto violations = fmcw::validate(config);
    if (!violations.empty()) {
        std::string msg = path + ": invalid config:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    return config;
}

fmcw::Scenario load_valid_scenario(const std::string& path) {
    fmcw::Scenario scenario = fmcw::load_scenario(path);
    auto violations = fmcw::validate(scenario);
    if (!violations.empty()) {
        std::string msg = path + ": invalid scenario:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    return scenario;
}

void print_info(const fmcw::RadarConfig& c) {
    std::printf("f_low_hz: %.9g\n", c.f_low);
    std::printf("bandwidth_hz: %.9g\n", c.bandwidth);
    std::printf("sample_rate_hz: %.9g\n", c.sample_rate);
    std::printf("samples_per_chirp: %u\n", c.samples_per_chirp);
    std::printf("chirps_per_frame: %u\n", c.chirps_per_frame);
    std::printf("chirp_interval_s: %.9g\n", c.chirp_interval);
    std::printf("chirp_active_duration_s: %.9g\n", c.chirp_active_duration());
    std::printf("frame_rate_hz: %.9g\n", c.frame_rate);
    std::printf("zero_pad_size: %u\n", c.zero_pad_size);
    std::printf("adc_mode: %s\n", fmcw::to_string(c.adc_mode).c_str());
    std::printf("chirp_slope_hz_per_s: %.9g\n", fmcw::chirp_slope(c));
    std::printf("wavelength_m: %.9g\n", fmcw::wavelength(c));
    std::printf("range_resolution_m: %.9g\n", fmcw::range_resolution(c));
    std::printf("max_range_m: %.9g\n", fmcw::max_range(c));
    std::printf("max_velocity_mps: %.9g\n", fmcw::max_velocity(c));
    std::printf("velocity_resolution_mps: %.9g\n", fmcw::velocity_resolution(c));
    auto r_axis = fmcw::range_axis(c);
    auto v_axis = fmcw::velocity_axis(c);
    std::printf("range_bin_spacing_m: %.9g\n", r_axis.size() > 1 ? r_axis[1] - r_axis[0] : 0.0);
    std::printf("velocity_bin_spacing_mps: %.9g\n",
                v_axis.size() > 1 ? v_axis[1] - v_axis[0] : 0.0);
}

std::vector<fmcw::TrackPoint> process_frames(const fmcw::RadarConfig& config,
                                             const std::vector<fmcw::RawFrame>& frames,
                                             const fmcw::DetectorOptions& options,
                                             const fs::path& out_dir,
                                             const std::string& track_name,
                                             bool maps_pgm, bool maps_csv, double floor_db) {
    std::vector<fmcw::RangeDopplerMap> maps;
    maps.reserve(frames.size());
    for (const auto& frame : frames) maps.push_back(fmcw::process_frame(config, frame));
    std::vector<fmcw::TrackPoint> tracks = fmcw::track_run(maps, options, config);
    fmcw::write_track_csv((out_dir / track_name).string(), tracks);
    if (maps_pgm || maps_csv) {
        for (std::size_t i = 0; i < maps.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "map_%04zu", i);
            if (maps_pgm)
                fmcw::write_map_pgm((out_dir / (std::string(name) + ".pgm")).string(), maps[i],
                                    floor_db);
            if (maps_csv)
                fmcw::write_map_csv((out_dir / (std::string(name) + ".csv")).string(), maps[i]);
        }
    }
    return tracks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FMCW radar simulator, range-doppler processor, and evaluation harness"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, out_path, in_path;
    std::string tracks_arg, truth_arg, maps_arg;
    int runs = 1;
    long long seed = -1;
    double tolerance_ms = 25.0;
    double initial_distance = 0.0;
    double floor_db = -60.0;
    fmcw::DetectorOptions det;

    auto* info = app.add_subcommand("info", "Print derived radar parameters");
    info->add_option("--config", config_path, "Radar config JSON")->required();

    auto* simulate = app.add_subcommand("simulate", "Synthesize frame logs and ground truth");
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--scenario", scenario_path)->required();
    simulate->add_option("--out", out_path, "Output directory")->required();
    simulate->add_option("--runs", runs, "Number of seeded runs");
    simulate->add_option("--seed", seed, "Base seed (overrides scenario rng_seed)");

    auto* process = app.add_subcommand("process", "Run the range-doppler chain on a frame log");
    process->add_option("--in", in_path, "Frame log")->required();
    process->add_option("--out", out_path, "Output directory")->required();
    process->add_option("--maps", maps_arg, "Per-frame map formats: pgm,csv");
    process->add_option("--exclude-zero-doppler", det.exclude_zero_doppler_rows);
    process->add_option("--min-range-bins", det.min_range_bins);
    process->add_flag("--interp", det.parabolic_interpolation, "Parabolic peak interpolation");
    process->add_option("--floor-db", floor_db, "PGM dB floor");

    auto* evalc = app.add_subcommand("eval", "Compute RMSE report from tracks and truth");
    evalc->add_option("--tracks", tracks_arg, "Track CSV(s), comma separated")->required();
    evalc->add_option("--truth", truth_arg, "Truth CSV(s), comma separated")->required();
    evalc->add_option("--tolerance-ms", tolerance_ms, "Timestamp match tolerance");
    evalc->add_option("--initial-distance", initial_distance,
                      "Initial distance for odometry-only truth [m]");
    evalc->add_option("--out", out_path, "Report JSON path")->required();

    auto* runc = app.add_subcommand("run", "simulate + process + eval in one pass");
    runc->add_option("--config", config_path)->required();
    runc->add_option("--scenario", scenario_path)->required();
    runc->add_option("--out", out_path, "Output directory")->required();
    runc->add_option("--runs", runs);
    runc->add_option("--seed", seed);
    runc->add_option("--exclude-zero-doppler", det.exclude_zero_doppler_rows);
    runc->add_option("--min-range-bins", det.min_range_bins);
    runc->add_flag("--interp", det.parabolic_interpolation);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n%s", e.what(), app.help().c_str());
        return kExitValidation;
    }

    auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t comma = s.find(',', start);
            if (comma == std::string::npos) {
                out.push_back(s.substr(start));
                break;
            }
            out.push_back(s.substr(start, comma - start));
            start = comma + 1;
        }
        return out;
    };

    try {
        if (*info) {
            print_info(load_valid_config(config_path));
            return kExitOk;
        }

        if (*simulate || *runc) {
            fmcw::RadarConfig config = load_valid_config(config_path);
            fmcw::Scenario scenario = load_valid_scenario(scenario_path);
            if (runs < 1) throw std::invalid_argument("--runs must be >= 1");
            fs::create_directories(out_path);
            std::uint64_t base_seed = seed >= 0 ? static_cast<std::uint64_t>(seed)
                                                : scenario.rng_seed;
            std::vector<fmcw::RunRmse> run_stats;
            for (int k = 0; k < runs; ++k) {
                fmcw::Scenario run_scenario = scenario;
                run_scenario.rng_seed = base_seed + static_cast<std::uint64_t>(k);
                fmcw::SimulationRun sim = fmcw::simulate_run(config, run_scenario);
                std::string tag = run_suffix(k);
                fs::path dir(out_path);
                fmcw::write_frame_log((dir / ("frames_" + tag + ".fmrd")).string(), config,
                                      sim.frames);
                fmcw::write_truth_csv((dir / ("truth_" + tag + ".csv")).string(), sim.truth);
                if (*runc) {
                    auto tracks = process_frames(config, sim.frames, det, dir,
                                                 "track_" + tag + ".csv", false, false, floor_db);
                    auto pairs = fmcw::align(tracks, sim.truth, tolerance_ms / 1000.0);
                    run_stats.push_back(fmcw::compute_rmse(pairs));
                }
            }
            if (*runc) {
                fmcw::RmseReport report = fmcw::summarize_runs(run_stats);
                fmcw::detail::write_file((fs::path(out_path) / "report.json").string(),
                                         fmcw::export_report(report).dump(2) + "\n");
            }
            return kExitOk;
        }

        if (*process) {
            auto [config, frames] = fmcw::read_frame_log(in_path);
            fs::create_directories(out_path);
            bool pgm = maps_arg.find("pgm") != std::string::npos;
            bool csv = maps_arg.find("csv") != std::string::npos;
            process_frames(config, frames, det, out_path, "track.csv", pgm, csv, floor_db);
            return kExitOk;
        }

        if (*evalc) {
            auto track_paths = split_list(tracks_arg);
            auto truth_paths = split_list(truth_arg);
            if (track_paths.size() != truth_paths.size())
                throw std::invalid_argument("--tracks and --truth must list the same number of files");
            std::vector<fmcw::RunRmse> run_stats;
            for (std::size_t i = 0; i < track_paths.size(); ++i) {
                auto tracks = fmcw::read_track_csv(track_paths[i]);
                auto truth = fmcw::read_truth_csv(truth_paths[i], initial_distance);
                auto pairs = fmcw::align(tracks, truth, tolerance_ms / 1000.0);
                run_stats.push_back(fmcw::compute_rmse(pairs));
            }
            fmcw::RmseReport report = fmcw::summarize_runs(run_stats);
            fmcw::detail::write_file(out_path, fmcw::export_report(report).dump(2) + "\n");
            return kExitOk;
        }
    } catch (const fmcw::FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}
