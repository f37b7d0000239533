#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "hark/errors.hpp"

namespace hark {

// Pipeline rate every clip is resampled to before feature extraction.
inline constexpr int kCanonicalRate = 22050;

struct AudioClip {
    std::vector<double> samples; // mono, each in [-1, 1]
    int sample_rate = 0;
    std::string source_id;

    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

namespace detail {

inline std::uint32_t read_u32le(std::span<const std::uint8_t> bytes, std::size_t pos) {
    return static_cast<std::uint32_t>(bytes[pos]) |
           (static_cast<std::uint32_t>(bytes[pos + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes[pos + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes[pos + 3]) << 24);
}

inline std::uint16_t read_u16le(std::span<const std::uint8_t> bytes, std::size_t pos) {
    return static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
}

inline float read_f32le(std::span<const std::uint8_t> bytes, std::size_t pos) {
    const std::uint32_t u = read_u32le(bytes, pos);
    float f;
    std::memcpy(&f, &u, sizeof(f));
    return f;
}

} // namespace detail

// RIFF/WAVE reader: little-endian, fmt codes 1 (PCM, 16-bit) and 3 (IEEE
// float, 32-bit), 1 or 2 channels. Unknown chunks are skipped. 16-bit samples
// are divided by 32768 so the most negative code maps exactly to -1.0; stereo
// is mixed to mono by per-sample channel average.
inline AudioClip decode_wav(std::span<const std::uint8_t> raw, std::string source_id = {}) {
    using detail::read_u16le;
    using detail::read_u32le;

    if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
        std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
        throw MalformedContainer("not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t format_code = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    std::size_t data_pos = 0;
    std::size_t data_len = 0;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const char* id = reinterpret_cast<const char*>(raw.data() + pos);
        const std::uint32_t chunk_len = read_u32le(raw, pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_len > raw.size()) {
            throw MalformedContainer("chunk '" + std::string(id, 4) + "' overruns the file");
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw MalformedContainer("fmt chunk too small");
            format_code = read_u16le(raw, body);
            channels = read_u16le(raw, body + 2);
            sample_rate = read_u32le(raw, body + 4);
            bits_per_sample = read_u16le(raw, body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_pos = body;
            data_len = chunk_len;
            have_data = true;
        }
        pos = body + chunk_len + (chunk_len & 1); // chunks are word-aligned
    }

    if (!have_fmt || !have_data) throw MalformedContainer("missing fmt or data chunk");
    if (sample_rate == 0) throw MalformedContainer("zero sample rate");
    if (channels != 1 && channels != 2) {
        throw UnsupportedFormat(std::to_string(channels) + " channels (want 1 or 2)");
    }
    if (format_code == 1) {
        if (bits_per_sample != 16) {
            throw UnsupportedFormat("PCM with " + std::to_string(bits_per_sample) + " bits");
        }
    } else if (format_code == 3) {
        if (bits_per_sample != 32) {
            throw UnsupportedFormat("float with " + std::to_string(bits_per_sample) + " bits");
        }
    } else {
        throw UnsupportedFormat("format code " + std::to_string(format_code));
    }

    const std::size_t bytes_per_sample = bits_per_sample / 8;
    const std::size_t frame_size = bytes_per_sample * channels;
    const std::size_t frames = data_len / frame_size;
    if (frames == 0) throw EmptyAudio("no data frames");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(sample_rate);
    clip.source_id = std::move(source_id);
    clip.samples.resize(frames);

    auto sample_at = [&](std::size_t p) -> double {
        if (format_code == 1) {
            const std::int16_t v = static_cast<std::int16_t>(read_u16le(raw, p));
            return static_cast<double>(v) / 32768.0;
        }
        return static_cast<double>(detail::read_f32le(raw, p));
    };

    for (std::size_t i = 0; i < frames; ++i) {
        const std::size_t p = data_pos + i * frame_size;
        double s = sample_at(p);
        if (channels == 2) s = 0.5 * (s + sample_at(p + bytes_per_sample));
        clip.samples[i] = s;
    }
    return clip;
}

// Linear-interpolation resampler. Good enough for classification features;
// not a band-limited resampler.
inline AudioClip resample(const AudioClip& clip, int target_rate) {
    if (target_rate <= 0) throw Error("target_rate must be positive");
    if (clip.sample_rate == target_rate) return clip;

    const std::size_t n = clip.samples.size();
    AudioClip out;
    out.sample_rate = target_rate;
    out.source_id = clip.source_id;
    if (n == 0) return out;

    const double step = static_cast<double>(clip.sample_rate) / target_rate;
    const std::size_t m =
        static_cast<std::size_t>(std::floor(static_cast<double>(n - 1) / step)) + 1;
    out.samples.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = j * step;
        const std::size_t i = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(i);
        if (i + 1 < n) {
            out.samples[j] = clip.samples[i] * (1.0 - frac) + clip.samples[i + 1] * frac;
        } else {
            out.samples[j] = clip.samples[n - 1];
        }
    }
    return out;
}

// PCM 16-bit mono writer, used for the synthetic corpus.
inline std::vector<std::uint8_t> encode_wav_pcm16(const AudioClip& clip) {
    const std::size_t n = clip.samples.size();
    const std::uint32_t data_len = static_cast<std::uint32_t>(n * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len);

    auto put_u32 = [&](std::uint32_t v) {
        out.push_back(v & 0xff);
        out.push_back((v >> 8) & 0xff);
        out.push_back((v >> 16) & 0xff);
        out.push_back((v >> 24) & 0xff);
    };
    auto put_u16 = [&](std::uint16_t v) {
        out.push_back(v & 0xff);
        out.push_back((v >> 8) & 0xff);
    };
    auto put_tag = [&](const char* tag) { out.insert(out.end(), tag, tag + 4); };

    put_tag("RIFF");
    put_u32(36 + data_len);
    put_tag("WAVE");
    put_tag("fmt ");
    put_u32(16);
    put_u16(1); // PCM
    put_u16(1); // mono
    put_u32(static_cast<std::uint32_t>(clip.sample_rate));
    put_u32(static_cast<std::uint32_t>(clip.sample_rate) * 2);
    put_u16(2);
    put_u16(16);
    put_tag("data");
    put_u32(data_len);
    for (std::size_t i = 0; i < n; ++i) {
        double s = clip.samples[i];
        if (s > 1.0) s = 1.0;
        if (s < -1.0) s = -1.0;
        const auto v = static_cast<std::int16_t>(std::lrint(s * 32767.0));
        put_u16(static_cast<std::uint16_t>(v));
    }
    return out;
}

} // namespace hark
