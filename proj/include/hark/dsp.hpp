#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hark/errors.hpp"

namespace hark {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Slices samples into frames of frame_len starting every hop_len samples.
// Trailing samples that do not fill a frame are dropped.
inline std::vector<std::vector<double>> frame_signal(std::span<const double> samples,
                                                     std::size_t frame_len,
                                                     std::size_t hop_len) {
    if (samples.size() < frame_len) {
        throw ClipTooShort("signal of " + std::to_string(samples.size()) +
                           " samples is shorter than one frame (" +
                           std::to_string(frame_len) + ")");
    }
    const std::size_t count = 1 + (samples.size() - frame_len) / hop_len;
    std::vector<std::vector<double>> frames(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double* start = samples.data() + i * hop_len;
        frames[i].assign(start, start + frame_len);
    }
    return frames;
}

// Periodic Hann: w[i] = 0.5 - 0.5 cos(2 pi i / n). w[0] == 0.
inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

inline std::vector<double> apply_window(std::span<const double> frame,
                                        std::span<const double> window) {
    if (frame.size() != window.size()) {
        throw DimensionMismatch("frame/window length mismatch");
    }
    std::vector<double> out(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) out[i] = frame[i] * window[i];
    return out;
}

namespace detail {

// Iterative radix-2 Cooley-Tukey, in place.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace detail

// |DFT| of a real frame, bins 0..n/2. Frame length must be a power of two.
inline std::vector<double> magnitude_spectrum(std::span<const double> frame) {
    const std::size_t n = frame.size();
    if (!is_power_of_two(n)) {
        throw Error("frame length " + std::to_string(n) + " is not a power of two");
    }
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = {frame[i], 0.0};
    detail::fft_radix2(buf);
    std::vector<double> mags(n / 2 + 1);
    for (std::size_t m = 0; m <= n / 2; ++m) mags[m] = std::abs(buf[m]);
    return mags;
}

// HTK mel scale.
inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelFilterbank {
    std::size_t n_mels = 0;
    std::size_t n_bins = 0;                 // frame_len/2 + 1
    std::vector<std::vector<double>> weights; // n_mels rows of n_bins
    std::vector<double> center_freqs;       // Hz

    // Dot product of each filter row with a magnitude spectrum.
    std::vector<double> apply(std::span<const double> spectrum) const {
        if (spectrum.size() != n_bins) {
            throw DimensionMismatch("spectrum has " + std::to_string(spectrum.size()) +
                                    " bins, filterbank expects " + std::to_string(n_bins));
        }
        std::vector<double> out(n_mels, 0.0);
        for (std::size_t j = 0; j < n_mels; ++j) {
            double acc = 0.0;
            const auto& row = weights[j];
            for (std::size_t k = 0; k < n_bins; ++k) acc += row[k] * spectrum[k];
            out[j] = acc;
        }
        return out;
    }
};

// Triangular filters with band edges equally spaced on the mel axis between
// fmin and fmax, sampled at FFT-bin center frequencies. Filter j rises from
// edge j to edge j+1 and falls to edge j+2.
inline MelFilterbank build_mel_filterbank(std::size_t n_mels, std::size_t frame_len,
                                          int sample_rate, double fmin, double fmax) {
    if (n_mels == 0) throw Error("n_mels must be positive");
    if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
        throw Error("require 0 <= fmin < fmax <= sample_rate/2");
    }
    const std::size_t n_bins = frame_len / 2 + 1;

    std::vector<double> edges_hz(n_mels + 2);
    const double mel_lo = hz_to_mel(fmin);
    const double mel_hi = hz_to_mel(fmax);
    for (std::size_t i = 0; i < edges_hz.size(); ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                        static_cast<double>(n_mels + 1);
        edges_hz[i] = mel_to_hz(mel);
    }

    MelFilterbank fb;
    fb.n_mels = n_mels;
    fb.n_bins = n_bins;
    fb.weights.assign(n_mels, std::vector<double>(n_bins, 0.0));
    fb.center_freqs.resize(n_mels);

    const double hz_per_bin = static_cast<double>(sample_rate) / static_cast<double>(frame_len);
    for (std::size_t j = 0; j < n_mels; ++j) {
        const double left = edges_hz[j];
        const double center = edges_hz[j + 1];
        const double right = edges_hz[j + 2];
        fb.center_freqs[j] = center;
        bool any = false;
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = k * hz_per_bin;
            double w = 0.0;
            if (f > left && f < right) {
                w = f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
            }
            fb.weights[j][k] = w;
            any = any || w > 0.0;
        }
        if (!any) {
            throw DegenerateFilter("mel filter " + std::to_string(j) +
                                   " spans no FFT bins; lower n_mels or raise frame_len");
        }
    }
    return fb;
}

// Orthonormal DCT-II, coefficients 1..n_coeffs (coefficient 0 is dropped; the
// pipeline carries an explicit energy term instead).
inline std::vector<double> dct_ii(std::span<const double> input, std::size_t n_coeffs) {
    const std::size_t m = input.size();
    std::vector<double> out(n_coeffs, 0.0);
    const double scale = std::sqrt(2.0 / static_cast<double>(m));
    for (std::size_t k = 1; k <= n_coeffs; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += input[i] * std::cos(M_PI * static_cast<double>(k) *
                                       (2.0 * static_cast<double>(i) + 1.0) /
                                       (2.0 * static_cast<double>(m)));
        }
        out[k - 1] = scale * acc;
    }
    return out;
}

// ln of the frame's total energy, clamped at log_floor.
inline double frame_log_energy(std::span<const double> frame, double log_floor) {
    double acc = 0.0;
    for (double s : frame) acc += s * s;
    return std::log(acc > log_floor ? acc : log_floor);
}

} // namespace hark
