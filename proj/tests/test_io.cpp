#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fmcw/io.hpp"
#include "fmcw/rng.hpp"
#include "test_util.hpp"

using namespace fmcw;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const char* name) {
    fs::path dir = fs::temp_directory_path() / "fmcw_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<RawFrame> random_frames(const RadarConfig& c, std::size_t count, Rng& rng) {
    std::vector<RawFrame> frames;
    bool complex_mode = c.adc_mode == AdcMode::complex;
    for (std::size_t i = 0; i < count; ++i) {
        RawFrame f;
        f.timestamp = static_cast<double>(i) / c.frame_rate;
        f.frame_index = static_cast<std::uint32_t>(i);
        f.samples = Matrix<std::complex<double>>(c.chirps_per_frame, c.samples_per_chirp);
        for (auto& v : f.samples.data) {
            // f32-representable values so the round trip is bit exact
            float re = static_cast<float>(rng.uniform(-1.0, 1.0));
            float im = complex_mode ? static_cast<float>(rng.uniform(-1.0, 1.0)) : 0.0f;
            v = {re, im};
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace

TEST_CASE("frame log round trip, real and complex modes") {
    Rng rng(91);
    for (AdcMode mode : {AdcMode::real, AdcMode::complex}) {
        RadarConfig c = testutil::reference_config();
        c.adc_mode = mode;
        c.samples_per_chirp = 8;
        c.chirps_per_frame = 8;
        c.zero_pad_size = 16;
        auto frames = random_frames(c, 20, rng);
        auto path = temp_path(mode == AdcMode::real ? "roundtrip_real.fmrd" : "roundtrip_cplx.fmrd");
        write_frame_log(path.string(), c, frames);
        auto [config, back] = read_frame_log(path.string());
        CHECK(config.adc_mode == mode);
        CHECK(config.f_low == c.f_low);
        REQUIRE(back.size() == frames.size());
        for (std::size_t i = 0; i < frames.size(); ++i) {
            CHECK(back[i].timestamp == frames[i].timestamp);
            for (std::size_t k = 0; k < frames[i].samples.size(); ++k)
                CHECK(back[i].samples.data[k] == frames[i].samples.data[k]);
        }
    }
}

TEST_CASE("empty frame list is a valid log") {
    RadarConfig c = testutil::reference_config();
    auto path = temp_path("empty.fmrd");
    write_frame_log(path.string(), c, {});
    auto [config, frames] = read_frame_log(path.string());
    CHECK(frames.empty());
    CHECK(config.bandwidth == c.bandwidth);
}

TEST_CASE("truncated log reports a byte offset") {
    RadarConfig c = testutil::reference_config();
    c.samples_per_chirp = 8;
    c.chirps_per_frame = 8;
    c.zero_pad_size = 16;
    Rng rng(5);
    auto path = temp_path("trunc.fmrd");
    write_frame_log(path.string(), c, random_frames(c, 3, rng));
    auto size = fs::file_size(path);
    fs::resize_file(path, size - 17);  // mid-frame
    try {
        read_frame_log(path.string());
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
}

TEST_CASE("bad magic and bad version are rejected") {
    auto path = temp_path("badmagic.fmrd");
    detail::write_file(path.string(), "NOPE-not-a-frame-log");
    CHECK_THROWS_AS(read_frame_log(path.string()), FormatError);

    RadarConfig c = testutil::reference_config();
    auto vpath = temp_path("badversion.fmrd");
    write_frame_log(vpath.string(), c, {});
    std::fstream f(vpath, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    char v2[2] = {9, 0};
    f.write(v2, 2);
    f.close();
    CHECK_THROWS_AS(read_frame_log(vpath.string()), FormatError);

    CHECK_THROWS_AS(read_frame_log(temp_path("missing.fmrd").string()), FormatError);
}

TEST_CASE("track csv round trip at 9 significant digits") {
    std::vector<TrackPoint> tracks;
    Rng rng(17);
    for (int i = 0; i < 25; ++i) {
        TrackPoint p;
        p.timestamp = i * 0.05;
        p.range = rng.uniform(0.0, 3.7);
        p.radial_velocity = rng.uniform(-8.0, 8.0);
        p.peak_magnitude = rng.uniform(0.0, 100.0);
        p.in_range = rng.uniform() < 0.8;
        tracks.push_back(p);
    }
    auto path = temp_path("track.csv");
    write_track_csv(path.string(), tracks);
    auto back = read_track_csv(path.string());
    REQUIRE(back.size() == tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        CHECK(back[i].timestamp == doctest::Approx(tracks[i].timestamp).epsilon(1e-8));
        CHECK(back[i].range == doctest::Approx(tracks[i].range).epsilon(1e-8));
        CHECK(back[i].radial_velocity ==
              doctest::Approx(tracks[i].radial_velocity).epsilon(1e-8));
        CHECK(back[i].in_range == tracks[i].in_range);
    }
}

TEST_CASE("truth csv round trip and odometry ingestion") {
    std::vector<GroundTruthPoint> truth{{0.0, 1.0, 0.5, true}, {0.05, 1.025, 0.5, false}};
    auto path = temp_path("truth.csv");
    write_truth_csv(path.string(), truth);
    auto back = read_truth_csv(path.string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].range == doctest::Approx(1.0));
    CHECK_FALSE(back[1].in_range);

    auto odo_path = temp_path("odo.csv");
    detail::write_file(odo_path.string(), "timestamp_s,speed_mps\n0,1\n0.5,1\n1,1\n");
    auto gt = read_truth_csv(odo_path.string(), 2.0);
    REQUIRE(gt.size() == 3);
    CHECK(gt[2].range == doctest::Approx(3.0));

    auto odo_r = temp_path("odo_range.csv");
    detail::write_file(odo_r.string(), "timestamp_s,speed_mps,range_m\n0,1,2\n0.5,1,2.5\n");
    gt = read_truth_csv(odo_r.string());
    REQUIRE(gt.size() == 2);
    CHECK(gt[1].range == doctest::Approx(2.5));

    auto bad = temp_path("bad.csv");
    detail::write_file(bad.string(), "x,y\n1,2\n");
    CHECK_THROWS_AS(read_truth_csv(bad.string()), FormatError);
}

TEST_CASE("map csv and pgm exports") {
    RadarConfig c = testutil::reference_config();
    c.samples_per_chirp = 8;
    c.chirps_per_frame = 8;
    c.zero_pad_size = 8;
    RangeDopplerMap map;
    map.magnitude = Matrix<double>(8, 4);
    map.magnitude(3, 2) = 10.0;
    map.range_axis = range_axis(c);
    map.velocity_axis = velocity_axis(c);

    auto csv_path = temp_path("map.csv");
    write_map_csv(csv_path.string(), map);
    std::string data = detail::read_file(csv_path.string());
    CHECK(data.rfind("range_m,", 0) == 0);
    CHECK(data.find("\nvelocity_mps,") != std::string::npos);

    auto pgm_path = temp_path("map.pgm");
    write_map_pgm(pgm_path.string(), map, -60.0);
    std::string pgm = detail::read_file(pgm_path.string());
    CHECK(pgm.rfind("P5\n4 8\n255\n", 0) == 0);
    CHECK(pgm.size() == 11 + 32);
    CHECK(static_cast<unsigned char>(pgm[11 + 3 * 4 + 2]) == 255);  // the peak cell
}

TEST_CASE("config and scenario json files load") {
    auto cfg_path = temp_path("config.json");
    detail::write_file(cfg_path.string(), to_json(testutil::reference_config()).dump());
    RadarConfig c = load_config(cfg_path.string());
    CHECK(c.samples_per_chirp == 64);

    auto scn_path = temp_path("scenario.json");
    detail::write_file(scn_path.string(),
                       R"({"duration": 2.0, "ego_speed": 1.5,
                           "targets": [{"position": [0, 1], "velocity": [0, 0.5]}],
                           "noise_std": 0.1, "rng_seed": 3})");
    Scenario s = load_scenario(scn_path.string());
    CHECK(s.duration == 2.0);
    CHECK(ego_speed_at(s, 10.0) == doctest::Approx(1.5));
    REQUIRE(s.targets.size() == 1);
    CHECK(s.targets[0].vy == 0.5);
}
