#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "hark/audio.hpp"
#include "hark/dsp.hpp"
#include "hark/errors.hpp"
#include "hark/util.hpp"

namespace hark {

// Frame-level feature extraction parameters. Defaults assume clips at the
// canonical 22050 Hz rate.
struct MfccConfig {
    std::size_t frame_len = 2048;
    std::size_t hop_len = 512;
    std::size_t n_mels = 40;
    std::size_t n_coeffs = 12;
    double fmin = 0.0;
    double fmax = 11025.0;
    double log_floor = 1e-10;

    void validate(int sample_rate) const {
        if (!is_power_of_two(frame_len)) throw Error("frame_len must be a power of two");
        if (hop_len == 0 || hop_len > frame_len) throw Error("require 0 < hop_len <= frame_len");
        if (n_coeffs > n_mels) throw Error("n_coeffs must not exceed n_mels");
        if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
            throw Error("require 0 <= fmin < fmax <= sample_rate/2");
        }
        if (!(log_floor > 0.0)) throw Error("log_floor must be positive");
    }

    std::size_t dims() const { return n_coeffs + 1; }
};

enum class Aggregation { Mean, MeanStd };

inline std::string to_string(Aggregation agg) {
    return agg == Aggregation::Mean ? "mean" : "mean_std";
}

inline Aggregation aggregation_from_string(const std::string& name) {
    if (name == "mean") return Aggregation::Mean;
    if (name == "mean_std") return Aggregation::MeanStd;
    throw ParseError("unknown aggregation '" + name + "'");
}

// Canonical one-line form, embedded in feature-store and model headers so a
// cached artifact can never be reused under a different configuration.
inline std::string config_string(const MfccConfig& cfg, Aggregation agg, int sample_rate) {
    return "sample_rate=" + std::to_string(sample_rate) +
           " frame_len=" + std::to_string(cfg.frame_len) +
           " hop_len=" + std::to_string(cfg.hop_len) +
           " n_mels=" + std::to_string(cfg.n_mels) +
           " n_coeffs=" + std::to_string(cfg.n_coeffs) +
           " fmin=" + format_double(cfg.fmin) +
           " fmax=" + format_double(cfg.fmax) +
           " log_floor=" + format_double(cfg.log_floor) +
           " aggregate=" + to_string(agg);
}

inline std::string config_fingerprint(const MfccConfig& cfg, Aggregation agg, int sample_rate) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_string(cfg, agg, sample_rate))));
    return std::string(buf);
}

inline MfccConfig config_from_string(const std::string& text, Aggregation* agg_out,
                                     int* rate_out) {
    MfccConfig cfg;
    for (const auto& field : split(text, ' ')) {
        if (field.empty()) continue;
        const auto kv = split(field, '=');
        if (kv.size() != 2) throw ParseError("bad config field '" + field + "'");
        const std::string& key = kv[0];
        const std::string& val = kv[1];
        if (key == "sample_rate") *rate_out = static_cast<int>(parse_long(val));
        else if (key == "frame_len") cfg.frame_len = static_cast<std::size_t>(parse_long(val));
        else if (key == "hop_len") cfg.hop_len = static_cast<std::size_t>(parse_long(val));
        else if (key == "n_mels") cfg.n_mels = static_cast<std::size_t>(parse_long(val));
        else if (key == "n_coeffs") cfg.n_coeffs = static_cast<std::size_t>(parse_long(val));
        else if (key == "fmin") cfg.fmin = parse_double(val);
        else if (key == "fmax") cfg.fmax = parse_double(val);
        else if (key == "log_floor") cfg.log_floor = parse_double(val);
        else if (key == "aggregate") *agg_out = aggregation_from_string(val);
        else throw ParseError("unknown config key '" + key + "'");
    }
    return cfg;
}

struct FeatureMatrix {
    std::vector<std::vector<double>> rows; // one 13-dim vector per frame
    std::string clip_id;
};

// Per frame: window, magnitude spectrum, mel filterbank, ln (clamped at
// log_floor), DCT-II coefficients 1..n_coeffs, then the frame's log energy
// computed on the unwindowed frame.
inline FeatureMatrix extract_mfcc(const AudioClip& clip, const MfccConfig& cfg) {
    cfg.validate(clip.sample_rate);
    const auto frames = frame_signal(clip.samples, cfg.frame_len, cfg.hop_len);
    const auto window = hann_window(cfg.frame_len);
    const auto fb = build_mel_filterbank(cfg.n_mels, cfg.frame_len, clip.sample_rate,
                                         cfg.fmin, cfg.fmax);

    FeatureMatrix out;
    out.clip_id = clip.source_id;
    out.rows.reserve(frames.size());
    for (const auto& frame : frames) {
        const auto spectrum = magnitude_spectrum(apply_window(frame, window));
        auto mel = fb.apply(spectrum);
        for (double& e : mel) e = std::log(e > cfg.log_floor ? e : cfg.log_floor);
        auto row = dct_ii(mel, cfg.n_coeffs);
        row.push_back(frame_log_energy(frame, cfg.log_floor));
        out.rows.push_back(std::move(row));
    }
    return out;
}

// Collapses a frame sequence into one fixed-length vector: column means, or
// column means followed by column standard deviations.
inline std::vector<double> aggregate(const FeatureMatrix& matrix, Aggregation agg) {
    if (matrix.rows.empty()) throw EmptyMatrix("cannot aggregate an empty feature matrix");
    const std::size_t d = matrix.rows.front().size();
    const double n = static_cast<double>(matrix.rows.size());

    std::vector<double> mean(d, 0.0);
    for (const auto& row : matrix.rows) {
        for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= n;
    if (agg == Aggregation::Mean) return mean;

    std::vector<double> out = mean;
    out.resize(2 * d, 0.0);
    for (const auto& row : matrix.rows) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = row[c] - mean[c];
            out[d + c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < d; ++c) out[d + c] = std::sqrt(out[d + c] / n);
    return out;
}

// Per-dimension z-score fitted on training vectors. Near-constant columns
// keep std 1 so they pass through as zeros.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> std_dev;

    std::vector<double> apply(std::span<const double> v) const {
        if (v.size() != mean.size()) {
            throw DimensionMismatch("vector has " + std::to_string(v.size()) +
                                    " dims, scaler expects " + std::to_string(mean.size()));
        }
        std::vector<double> out(v.size());
        for (std::size_t c = 0; c < v.size(); ++c) out[c] = (v[c] - mean[c]) / std_dev[c];
        return out;
    }
};

inline Scaler fit_scaler(const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2) throw TooFewSamples("scaler needs at least 2 vectors");
    const std::size_t d = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != d) throw DimensionMismatch("inconsistent vector dimensions");
    }
    Scaler s;
    s.mean.assign(d, 0.0);
    s.std_dev.assign(d, 0.0);
    const double n = static_cast<double>(vectors.size());
    for (const auto& v : vectors) {
        for (std::size_t c = 0; c < d; ++c) s.mean[c] += v[c];
    }
    for (double& v : s.mean) v /= n;
    for (const auto& v : vectors) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = v[c] - s.mean[c];
            s.std_dev[c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        s.std_dev[c] = std::sqrt(s.std_dev[c] / n);
        if (s.std_dev[c] < 1e-8) s.std_dev[c] = 1.0;
    }
    return s;
}

} // namespace hark
