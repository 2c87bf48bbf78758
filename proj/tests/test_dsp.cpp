#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fmcw/dsp.hpp"
#include "fmcw/rng.hpp"
#include "fmcw/scene.hpp"
#include "test_util.hpp"

using namespace fmcw;
using cd = std::complex<double>;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, bool complex_vals) {
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data)
        v = {rng.uniform(-1.0, 1.0), complex_vals ? rng.uniform(-1.0, 1.0) : 0.0};
    return m;
}

}  // namespace

TEST_CASE("dc removal") {
    ComplexMatrix constant(3, 4, cd(5.0, 0.0));
    auto out = dc_removal(constant);
    for (const auto& v : out.data) CHECK(std::abs(v) < 1e-12);

    ComplexMatrix alt(1, 4);
    alt.data = {cd(1), cd(-1), cd(1), cd(-1)};
    out = dc_removal(alt);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out.data[i] - alt.data[i]) < 1e-12);

    // sinusoid plus offset: offset removed, shape intact
    ComplexMatrix sine(1, 64), expected(1, 64);
    for (std::size_t n = 0; n < 64; ++n) {
        expected(0, n) = std::sin(2.0 * M_PI * 4.0 * n / 64.0);
        sine(0, n) = expected(0, n) + 0.3;
    }
    out = dc_removal(sine);
    for (std::size_t n = 0; n < 64; ++n) CHECK(std::abs(out(0, n) - expected(0, n)) <= 1e-12);
}

TEST_CASE("hanning window") {
    auto w = hanning(5);
    CHECK(w[0] == doctest::Approx(0.0));
    CHECK(w[4] == doctest::Approx(0.0));
    CHECK(w[2] == doctest::Approx(1.0));  // center tap, odd length
    CHECK(hanning(1)[0] == doctest::Approx(1.0));

    ComplexMatrix ones(64, 64, cd(1.0, 0.0));
    auto windowed = apply_window(ones);
    auto w64 = hanning(64);
    for (std::size_t r = 0; r < 64; ++r)
        for (std::size_t c = 0; c < 64; ++c)
            CHECK(std::abs(windowed(r, c) - cd(w64[r] * w64[c], 0.0)) < 1e-12);
    for (std::size_t k = 0; k < 64; ++k) {
        CHECK(std::abs(windowed(0, k)) == doctest::Approx(0.0));
        CHECK(std::abs(windowed(k, 0)) == doctest::Approx(0.0));
    }
}

TEST_CASE("window output symmetric under double axis reversal for symmetric input") {
    Rng rng(5);
    ComplexMatrix m(9, 9);
    for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t c = 0; c < 9; ++c) {
            double v = rng.uniform();
            m(r, c) = v;
            m(8 - r, 8 - c) = v;  // centrally symmetric input
        }
    auto out = apply_window(m);
    for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t c = 0; c < 9; ++c)
            CHECK(std::abs(out(r, c) - out(8 - r, 8 - c)) < 1e-12);
}

TEST_CASE("zero pad") {
    Rng rng(2);
    ComplexMatrix m = random_matrix(64, 64, rng, false);
    auto padded = zero_pad(m, 256);
    CHECK(padded.rows == 256);
    CHECK(padded.cols == 256);
    std::size_t zeros = 0;
    cd sum_in(0, 0), sum_out(0, 0);
    for (const auto& v : m.data) sum_in += v;
    for (const auto& v : padded.data) {
        sum_out += v;
        if (v == cd(0.0, 0.0)) ++zeros;
    }
    CHECK(zeros >= 256 * 256 - 64 * 64);  // 60928 entries added
    CHECK(std::abs(sum_in - sum_out) < 1e-9);

    auto same = zero_pad(m, 64);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(same.data[i] == m.data[i]);

    CHECK_THROWS_AS(zero_pad(m, 32), std::invalid_argument);
}

TEST_CASE("range spectrum basics") {
    ComplexMatrix zeros(4, 16);
    auto out = range_spectrum(zeros, AdcMode::real);
    CHECK(out.cols == 8);
    for (const auto& v : out.data) CHECK(std::abs(v) == 0.0);

    // single tone at bin 3 concentrates there
    ComplexMatrix tone(1, 16);
    for (std::size_t n = 0; n < 16; ++n)
        tone(0, n) = std::polar(1.0, 2.0 * M_PI * 3.0 * n / 16.0);
    out = range_spectrum(tone, AdcMode::complex);
    for (std::size_t k = 0; k < 16; ++k) {
        if (k == 3)
            CHECK(std::abs(out(0, k)) == doctest::Approx(16.0));
        else
            CHECK(std::abs(out(0, k)) < 1e-9);
    }
}

TEST_CASE("range spectrum equals the naive DFT for small sizes") {
    Rng rng(3);
    for (std::size_t len : {4u, 7u, 12u, 16u}) {
        ComplexMatrix m = random_matrix(3, len, rng, true);
        auto fftd = range_spectrum(m, AdcMode::complex);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t k = 0; k < len; ++k) {
                cd acc(0, 0);
                for (std::size_t n = 0; n < len; ++n)
                    acc += m(r, n) * std::polar(1.0, -2.0 * M_PI * double(k) * double(n) / double(len));
                CHECK(std::abs(fftd(r, k) - acc) <= 1e-9 * (1.0 + std::abs(acc)));
            }
    }
}

TEST_CASE("doppler spectrum rotation") {
    // constant phasor column peaks at the center row
    ComplexMatrix col(16, 1, cd(1.0, 0.0));
    auto out = doppler_spectrum(col);
    for (std::size_t r = 0; r < 16; ++r) {
        if (r == 8)
            CHECK(std::abs(out(r, 0)) == doctest::Approx(16.0));
        else
            CHECK(std::abs(out(r, 0)) < 1e-9);
    }

    // +2 pi / N per-chirp step lands one bin above center
    for (std::size_t m = 0; m < 16; ++m) col(m, 0) = std::polar(1.0, 2.0 * M_PI * m / 16.0);
    out = doppler_spectrum(col);
    std::size_t argmax = 0;
    for (std::size_t r = 1; r < 16; ++r)
        if (std::abs(out(r, 0)) > std::abs(out(argmax, 0))) argmax = r;
    CHECK(argmax == 9);
}

TEST_CASE("process frame basics") {
    RadarConfig c = testutil::reference_config();
    RawFrame frame;
    frame.samples = ComplexMatrix(64, 64);
    auto map = process_frame(c, frame);
    CHECK(map.magnitude.rows == 256);
    CHECK(map.magnitude.cols == 128);
    for (double v : map.magnitude.data) CHECK(v == 0.0);
    CHECK(map.range_axis == range_axis(c));
    CHECK(map.velocity_axis == velocity_axis(c));

    frame.samples = ComplexMatrix(32, 64);
    CHECK_THROWS_AS(process_frame(c, frame), std::invalid_argument);
}

TEST_CASE("process frame is homogeneous in the input scale") {
    RadarConfig c = testutil::reference_config();
    Rng rng(4);
    RawFrame frame;
    frame.samples = random_matrix(64, 64, rng, false);
    RawFrame scaled = frame;
    for (auto& v : scaled.samples.data) v *= 3.0;
    auto m1 = process_frame(c, frame);
    auto m2 = process_frame(c, scaled);
    std::size_t argmax1 = 0, argmax2 = 0;
    for (std::size_t i = 0; i < m1.magnitude.size(); ++i) {
        CHECK(m2.magnitude.data[i] ==
              doctest::Approx(3.0 * m1.magnitude.data[i]).epsilon(1e-9));
        if (m1.magnitude.data[i] > m1.magnitude.data[argmax1]) argmax1 = i;
        if (m2.magnitude.data[i] > m2.magnitude.data[argmax2]) argmax2 = i;
    }
    CHECK(argmax1 == argmax2);
}

TEST_CASE("pipeline is linear in the complex spectrum") {
    RadarConfig c = testutil::reference_config();
    c.samples_per_chirp = 16;
    c.chirps_per_frame = 16;
    c.zero_pad_size = 32;
    Rng rng(6);
    RawFrame a, b, mix;
    a.samples = random_matrix(16, 16, rng, false);
    b.samples = random_matrix(16, 16, rng, false);
    const double alpha = 1.7, beta = -0.4;
    mix.samples = ComplexMatrix(16, 16);
    for (std::size_t i = 0; i < mix.samples.size(); ++i)
        mix.samples.data[i] = alpha * a.samples.data[i] + beta * b.samples.data[i];
    auto sa = process_frame(c, a).complex_spectrum;
    auto sb = process_frame(c, b).complex_spectrum;
    auto sm = process_frame(c, mix).complex_spectrum;
    ComplexMatrix expected(sm.rows, sm.cols);
    for (std::size_t i = 0; i < sm.size(); ++i)
        expected.data[i] = alpha * sa.data[i] + beta * sb.data[i];
    CHECK(testutil::relative_error(sm, expected) < 1e-9);
}

TEST_CASE("pipeline matches the quadratic-time oracle on small frames") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t chirps = 2 + static_cast<std::size_t>(rng.uniform(0.0, 15.0));
        std::size_t samples = 2 + static_cast<std::size_t>(rng.uniform(0.0, 15.0));
        std::size_t pad = std::max(chirps, samples) + static_cast<std::size_t>(rng.uniform(0.0, 9.0));
        if (pad % 2) ++pad;  // center-row convention assumes even pad
        bool real_mode = rng.uniform() < 0.5;

        RadarConfig c = testutil::reference_config();
        c.samples_per_chirp = static_cast<std::uint32_t>(samples);
        c.chirps_per_frame = static_cast<std::uint32_t>(chirps);
        c.zero_pad_size = static_cast<std::uint32_t>(pad);
        c.adc_mode = real_mode ? AdcMode::real : AdcMode::complex;

        RawFrame frame;
        frame.samples = random_matrix(chirps, samples, rng, !real_mode);
        auto spec = process_frame(c, frame).complex_spectrum;
        auto oracle = testutil::oracle_pipeline(frame.samples, pad, real_mode);
        REQUIRE(spec.rows == oracle.rows);
        REQUIRE(spec.cols == oracle.cols);
        CHECK(testutil::relative_error(spec, oracle) < 1e-9);
    }
}

TEST_CASE("static noiseless world keeps energy at zero Doppler") {
    // unpadded: the 3-row Hanning leakage bound is stated per native bin
    RadarConfig c = testutil::reference_config();
    c.zero_pad_size = 64;
    Scenario s;
    s.duration = 1.0;
    s.targets.push_back({0.3, 1.5, 0.0, 0.0, 1.0, ScattererKind::target});
    s.boundary_walls = BoundaryWalls{-1.0, 1.0, 0.5, 3.0, 0.3};
    Rng rng(0);
    RawFrame frame = synthesize_frame(c, s, 0.0, rng);  // ego speed 0
    auto map = process_frame(c, frame);
    double total = 0.0, center = 0.0;
    std::size_t mid = map.magnitude.rows / 2;
    for (std::size_t r = 0; r < map.magnitude.rows; ++r)
        for (std::size_t col = 0; col < map.magnitude.cols; ++col) {
            double e = map.magnitude(r, col) * map.magnitude(r, col);
            total += e;
            if (r + 1 >= mid && r <= mid + 1) center += e;
        }
    CHECK(center >= 0.99 * total);
}

TEST_CASE("magnitude in dB") {
    RadarConfig c = testutil::reference_config();
    c.samples_per_chirp = 4;
    c.chirps_per_frame = 4;
    c.zero_pad_size = 4;
    RangeDopplerMap map;
    map.magnitude = Matrix<double>(2, 2);
    map.magnitude.data = {4.0, 2.0, 0.0, 1.0};
    auto db = magnitude_db(map, -60.0);
    CHECK(db.data[0] == doctest::Approx(0.0));
    CHECK(db.data[1] == doctest::Approx(-6.0206).epsilon(1e-4));
    CHECK(db.data[2] == doctest::Approx(-60.0));

    map.magnitude.data = {0.0, 0.0, 0.0, 0.0};
    db = magnitude_db(map, -60.0);
    for (double v : db.data) CHECK(v == -60.0);

    CHECK_THROWS_AS(magnitude_db(map, 0.0), std::invalid_argument);
}
