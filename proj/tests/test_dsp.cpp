#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hark/dsp.hpp"
#include "hark/util.hpp"
#include "support/oracles.hpp"

using namespace hark;

TEST_CASE("frame_signal counts and boundaries", "[dsp]") {
    SECTION("single frame when N equals frame_len") {
        const std::vector<double> x = {1, 2, 3, 4};
        const auto frames = frame_signal(x, 4, 2);
        REQUIRE(frames.size() == 1);
        REQUIRE(frames[0] == x);
    }
    SECTION("exact tiling") {
        const std::vector<double> x = {0, 1, 2, 3, 4, 5};
        const auto frames = frame_signal(x, 2, 2);
        REQUIRE(frames.size() == 3);
        REQUIRE(frames[0] == std::vector<double>{0, 1});
        REQUIRE(frames[1] == std::vector<double>{2, 3});
        REQUIRE(frames[2] == std::vector<double>{4, 5});
    }
    SECTION("tail samples dropped") {
        const std::vector<double> x = {0, 1, 2, 3, 4};
        const auto frames = frame_signal(x, 2, 2);
        REQUIRE(frames.size() == 2);
        REQUIRE(frames[1] == std::vector<double>{2, 3});
    }
    SECTION("count formula on random sizes") {
        Rng rng(2);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t frame = 1 + rng.index(64);
            const std::size_t hop = 1 + rng.index(frame);
            const std::size_t n = frame + rng.index(512);
            const std::vector<double> x(n, 0.0);
            REQUIRE(frame_signal(x, frame, hop).size() == 1 + (n - frame) / hop);
        }
    }
    SECTION("too short") {
        const std::vector<double> x = {1, 2, 3};
        REQUIRE_THROWS_AS(frame_signal(x, 4, 2), ClipTooShort);
    }
}

TEST_CASE("periodic hann window", "[dsp]") {
    const std::size_t n = 16;
    const auto w = hann_window(n);
    REQUIRE(w.size() == n);
    REQUIRE(w[0] == 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
        REQUIRE(w[i] == Catch::Approx(expect).margin(1e-15));
    }
    for (std::size_t i = 1; i < n; ++i) {
        REQUIRE(w[i] == Catch::Approx(w[n - i]).margin(1e-15));
    }

    const std::vector<double> zeros(n, 0.0);
    REQUIRE(apply_window(zeros, w) == zeros);
    const std::vector<double> ones(n, 1.0);
    REQUIRE(apply_window(ones, w) == w);
}

TEST_CASE("magnitude spectrum matches the direct DFT", "[dsp]") {
    SECTION("zeros map to zeros") {
        const std::vector<double> x(64, 0.0);
        for (double m : magnitude_spectrum(x)) REQUIRE(m == 0.0);
    }
    SECTION("pure cosine concentrates in one bin") {
        const std::size_t n = 64;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * M_PI * 4.0 * i / n);
        const auto mags = magnitude_spectrum(x);
        REQUIRE(mags.size() == n / 2 + 1);
        REQUIRE(mags[4] == Catch::Approx(32.0).margin(1e-9));
        for (std::size_t k = 0; k < mags.size(); ++k) {
            if (k != 4) REQUIRE(mags[k] < 1e-9);
        }
    }
    SECTION("random frames, n = 64 and 256") {
        Rng rng(5);
        for (std::size_t n : {std::size_t{64}, std::size_t{256}}) {
            for (int trial = 0; trial < 25; ++trial) {
                std::vector<double> x(n);
                for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
                const auto fast = magnitude_spectrum(x);
                const auto slow = oracle::dft_magnitude(x);
                REQUIRE(fast.size() == slow.size());
                for (std::size_t k = 0; k < fast.size(); ++k) {
                    REQUIRE(fast[k] == Catch::Approx(slow[k]).margin(1e-6));
                }
            }
        }
    }
    SECTION("Parseval holds per frame") {
        Rng rng(6);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 128;
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
            const auto mags = magnitude_spectrum(x);
            const double time_e = oracle::time_energy(x);
            const double spec_e = oracle::spectral_energy(mags, n);
            REQUIRE(spec_e == Catch::Approx(time_e).epsilon(1e-6));
        }
    }
    SECTION("non power of two rejected") {
        const std::vector<double> x(48, 0.0);
        REQUIRE_THROWS_AS(magnitude_spectrum(x), Error);
    }
}

TEST_CASE("mel scale conversions", "[dsp]") {
    REQUIRE(hz_to_mel(0.0) == 0.0);
    REQUIRE(hz_to_mel(700.0) == Catch::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
    for (double f : {100.0, 1000.0, 8000.0}) {
        REQUIRE(mel_to_hz(hz_to_mel(f)) == Catch::Approx(f).epsilon(1e-9));
    }
    for (double m : {10.0, 500.0, 3000.0}) {
        REQUIRE(hz_to_mel(mel_to_hz(m)) == Catch::Approx(m).epsilon(1e-9));
    }
}

TEST_CASE("mel filterbank geometry", "[dsp]") {
    const auto fb = build_mel_filterbank(40, 2048, 22050, 0.0, 11025.0);
    REQUIRE(fb.weights.size() == 40);
    REQUIRE(fb.weights[0].size() == 1025);

    SECTION("weights nonnegative with contiguous support") {
        for (const auto& row : fb.weights) {
            bool in_support = false;
            bool left_support = false;
            for (double w : row) {
                REQUIRE(w >= 0.0);
                if (w > 0.0) {
                    REQUIRE_FALSE(left_support); // support must not restart
                    in_support = true;
                } else if (in_support) {
                    left_support = true;
                    in_support = false;
                }
            }
        }
    }
    SECTION("row maximum is unique and sits at the bin nearest the center") {
        const double hz_per_bin = 22050.0 / 2048.0;
        for (std::size_t j = 0; j < fb.weights.size(); ++j) {
            std::size_t arg = 0;
            double best = -1.0;
            std::size_t best_count = 0;
            for (std::size_t k = 0; k < fb.weights[j].size(); ++k) {
                if (fb.weights[j][k] > best) {
                    best = fb.weights[j][k];
                    arg = k;
                    best_count = 1;
                } else if (fb.weights[j][k] == best) {
                    ++best_count;
                }
            }
            REQUIRE(best_count == 1);
            const double nearest = std::round(fb.center_freqs[j] / hz_per_bin);
            REQUIRE(std::abs(static_cast<double>(arg) - nearest) <= 1.0);
        }
    }
    SECTION("interior bins are covered by some filter") {
        const double hz_per_bin = 22050.0 / 2048.0;
        for (std::size_t k = 1; k < 1024; ++k) {
            const double f = k * hz_per_bin;
            if (f <= 0.0 || f >= 11025.0) continue;
            double total = 0.0;
            for (const auto& row : fb.weights) total += row[k];
            REQUIRE(total > 0.0);
        }
    }
    SECTION("center frequencies strictly increase") {
        for (std::size_t j = 1; j < fb.center_freqs.size(); ++j) {
            REQUIRE(fb.center_freqs[j] > fb.center_freqs[j - 1]);
        }
    }
    SECTION("too many filters for the resolution") {
        REQUIRE_THROWS_AS(build_mel_filterbank(64, 64, 22050, 0.0, 11025.0), DegenerateFilter);
    }
    SECTION("filterbank application is a plain dot product") {
        Rng rng(8);
        std::vector<double> spectrum(1025);
        for (auto& v : spectrum) v = rng.uniform();
        const auto applied = fb.apply(spectrum);
        REQUIRE(applied.size() == 40);
        for (std::size_t j = 0; j < 40; ++j) {
            double expect = 0.0;
            for (std::size_t k = 0; k < spectrum.size(); ++k) {
                expect += fb.weights[j][k] * spectrum[k];
            }
            REQUIRE(applied[j] == Catch::Approx(expect).margin(1e-12));
        }
        std::vector<double> wrong(64, 0.0);
        REQUIRE_THROWS_AS(fb.apply(wrong), DimensionMismatch);
    }
}

TEST_CASE("orthonormal DCT-II", "[dsp]") {
    SECTION("zeros in, zeros out") {
        const std::vector<double> x(40, 0.0);
        for (double v : dct_ii(x, 12)) REQUIRE(v == 0.0);
    }
    SECTION("constant input has zero coefficients above 0") {
        const std::vector<double> x(40, 3.7);
        for (double v : dct_ii(x, 12)) REQUIRE(std::abs(v) < 1e-12);
    }
    SECTION("transform matrix is orthonormal") {
        // rebuild the library's transform from unit vectors, prepend the
        // analytic constant row for k = 0, and check D * D^T = I
        const std::size_t m = 40;
        std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
        for (std::size_t col = 0; col < m; ++col) {
            std::vector<double> unit(m, 0.0);
            unit[col] = 1.0;
            const auto coeffs = dct_ii(unit, m - 1); // rows 1..m-1
            d[0][col] = std::sqrt(1.0 / static_cast<double>(m));
            for (std::size_t k = 1; k < m; ++k) d[k][col] = coeffs[k - 1];
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double dot = 0.0;
                for (std::size_t t = 0; t < m; ++t) dot += d[i][t] * d[j][t];
                worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        }
        REQUIRE(worst < 1e-9);
    }
    SECTION("matches the closed form on random input") {
        Rng rng(10);
        const std::size_t m = 24;
        std::vector<double> x(m);
        for (auto& v : x) v = rng.uniform() * 4.0 - 2.0;
        const auto got = dct_ii(x, 10);
        REQUIRE(got.size() == 10);
        for (std::size_t k = 1; k <= 10; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                acc += x[i] * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * m));
            }
            acc *= std::sqrt(2.0 / static_cast<double>(m));
            REQUIRE(got[k - 1] == Catch::Approx(acc).margin(1e-12));
        }
    }
}

TEST_CASE("frame log energy", "[dsp]") {
    const std::vector<double> zeros(32, 0.0);
    REQUIRE(frame_log_energy(zeros, 1e-10) == Catch::Approx(std::log(1e-10)).epsilon(1e-12));
    REQUIRE(frame_log_energy(zeros, 1e-10) == Catch::Approx(-23.0259).margin(1e-4));

    std::vector<double> unit(4, 0.5); // sum of squares = 1
    REQUIRE(frame_log_energy(unit, 1e-10) == Catch::Approx(0.0).margin(1e-12));

    std::vector<double> e_frame = {std::sqrt(std::exp(1.0))};
    REQUIRE(frame_log_energy(e_frame, 1e-10) == Catch::Approx(1.0).epsilon(1e-12));
}
