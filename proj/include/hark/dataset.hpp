#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hark/audio.hpp"
#include "hark/errors.hpp"
#include "hark/features.hpp"
#include "hark/parallel.hpp"
#include "hark/util.hpp"

namespace hark {

inline const std::vector<std::string>& default_class_set() {
    static const std::vector<std::string> classes = {
        "car_horn", "children_playing", "gun_shot",  "jackhammer",
        "quietness", "silence",          "siren",     "street_music"};
    return classes;
}

struct ManifestEntry {
    std::string path; // relative to the manifest root
    std::string label;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path root;
    std::vector<std::string> class_set;
};

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("read failed on " + path.string());
    return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed on " + path.string());
}

inline void write_file_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoFailure("write failed on " + path.string());
}

// Manifest format: one `relative_path,label` record per line, split at the
// last comma so paths may contain commas. `#` lines are comments, except an
// optional `# classes: a,b,c` directive (before any record) replacing the
// default label set.
inline Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());

    Manifest manifest;
    manifest.root = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    manifest.class_set = default_class_set();

    std::string line;
    std::size_t line_no = 0;
    bool saw_entry = false;
    std::vector<std::string> seen_paths;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '#') {
            const std::string directive = "# classes:";
            if (stripped.rfind(directive, 0) == 0) {
                if (saw_entry) {
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": class directive must precede all records");
                }
                std::vector<std::string> classes;
                for (const auto& part : split(stripped.substr(directive.size()), ',')) {
                    const std::string name = trim(part);
                    if (name.empty()) {
                        throw ParseError("line " + std::to_string(line_no) +
                                         ": empty class name in directive");
                    }
                    classes.push_back(name);
                }
                if (classes.empty()) {
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": class directive lists no classes");
                }
                std::vector<std::string> unique_check = classes;
                std::sort(unique_check.begin(), unique_check.end());
                if (std::adjacent_find(unique_check.begin(), unique_check.end()) !=
                    unique_check.end()) {
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": duplicate class name in directive");
                }
                manifest.class_set = std::move(classes);
            }
            continue;
        }

        const auto comma = stripped.rfind(',');
        if (comma == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected `path,label`");
        }
        ManifestEntry entry;
        entry.path = trim(stripped.substr(0, comma));
        entry.label = trim(stripped.substr(comma + 1));
        if (entry.path.empty() || entry.label.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty path or label");
        }
        if (std::find(manifest.class_set.begin(), manifest.class_set.end(), entry.label) ==
            manifest.class_set.end()) {
            throw UnknownLabel("line " + std::to_string(line_no) + ": label '" + entry.label +
                               "' not in class set");
        }
        if (std::find(seen_paths.begin(), seen_paths.end(), entry.path) != seen_paths.end()) {
            throw DuplicatePath("line " + std::to_string(line_no) + ": duplicate path '" +
                                entry.path + "'");
        }
        seen_paths.push_back(entry.path);
        manifest.entries.push_back(std::move(entry));
        saw_entry = true;
    }
    return manifest;
}

inline void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::string text = "# classes: ";
    for (std::size_t i = 0; i < manifest.class_set.size(); ++i) {
        if (i > 0) text += ",";
        text += manifest.class_set[i];
    }
    text += "\n";
    for (const auto& entry : manifest.entries) {
        text += entry.path + "," + entry.label + "\n";
    }
    write_file_text(path, text);
}

struct FeatureRow {
    std::string clip_id;
    std::string label;
    std::vector<double> values;
};

struct FeatureStore {
    std::string config;      // canonical feature-config string
    std::string fingerprint; // hex digest of the config string
    std::size_t dim = 0;
    std::vector<FeatureRow> rows;

    std::vector<std::vector<double>> matrix() const {
        std::vector<std::vector<double>> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row.values);
        return out;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row.label);
        return out;
    }
};

inline std::string serialize_feature_store(const FeatureStore& store) {
    std::string text;
    text += "# fingerprint=" + store.fingerprint + "\n";
    text += "# dim=" + std::to_string(store.dim) + "\n";
    text += "# config=" + store.config + "\n";
    for (const auto& row : store.rows) {
        text += row.clip_id + "," + row.label;
        for (double v : row.values) {
            text += ",";
            text += format_double(v);
        }
        text += "\n";
    }
    return text;
}

inline void save_feature_store(const FeatureStore& store, const std::filesystem::path& path) {
    write_file_text(path, serialize_feature_store(store));
}

inline FeatureStore parse_feature_store(std::istream& in, const std::string& origin) {
    FeatureStore store;
    std::string line;
    std::size_t line_no = 0;
    bool saw_fingerprint = false;
    bool saw_dim = false;

    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError(origin + " line " + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '#') {
            const std::string body = trim(stripped.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key == "fingerprint") {
                store.fingerprint = value;
                saw_fingerprint = true;
            } else if (key == "dim") {
                store.dim = static_cast<std::size_t>(parse_long(value));
                saw_dim = true;
            } else if (key == "config") {
                store.config = body.substr(eq + 1); // keep the config string verbatim
            }
            continue;
        }
        if (!saw_fingerprint || !saw_dim) throw fail("data row before fingerprint/dim header");
        if (store.dim == 0) throw fail("dim must be positive");

        // Rows are parsed from the end: `dim` numeric fields, then the label,
        // the rest (which may itself contain commas) is the clip id.
        FeatureRow row;
        std::string rest = stripped;
        row.values.assign(store.dim, 0.0);
        for (std::size_t k = 0; k < store.dim; ++k) {
            const auto comma = rest.rfind(',');
            if (comma == std::string::npos) throw fail("too few fields");
            row.values[store.dim - 1 - k] = parse_double(trim(rest.substr(comma + 1)));
            rest = rest.substr(0, comma);
        }
        const auto comma = rest.rfind(',');
        if (comma == std::string::npos) throw fail("missing label field");
        row.label = trim(rest.substr(comma + 1));
        row.clip_id = trim(rest.substr(0, comma));
        if (row.clip_id.empty() || row.label.empty()) throw fail("empty id or label");
        store.rows.push_back(std::move(row));
    }

    if (!saw_fingerprint || !saw_dim) {
        throw ParseError(origin + ": missing fingerprint/dim header");
    }
    if (!store.config.empty()) {
        char digest[17];
        std::snprintf(digest, sizeof digest, "%016llx",
                      static_cast<unsigned long long>(fnv1a(store.config)));
        if (store.fingerprint != digest) {
            throw ParseError(origin + ": fingerprint does not match embedded config (file edited"
                             " or produced by an incompatible build)");
        }
    }
    return store;
}

inline FeatureStore load_feature_store(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    return parse_feature_store(in, path.string());
}

struct ClipFailure {
    std::string path;
    std::string reason;
};

struct BuildResult {
    FeatureStore store;
    std::vector<ClipFailure> failures;
};

// Decode, resample to the canonical rate, extract, aggregate — one store row
// per manifest entry that survives. Failures are reported per clip; the run
// aborts only when every clip fails.
inline BuildResult build_feature_store(const Manifest& manifest, const MfccConfig& config,
                                       Aggregation aggregation, std::size_t jobs = 1) {
    config.validate(kCanonicalRate);

    BuildResult result;
    result.store.config = config_string(config, aggregation, kCanonicalRate);
    result.store.fingerprint = config_fingerprint(config, aggregation, kCanonicalRate);
    result.store.dim = aggregation == Aggregation::MeanStd
                           ? static_cast<std::size_t>(config.dims()) * 2
                           : static_cast<std::size_t>(config.dims());

    const std::size_t n = manifest.entries.size();
    std::vector<FeatureRow> rows(n);
    std::vector<std::string> errors(n);
    std::vector<std::uint8_t> ok(n, 0);

    parallel_for(n, jobs, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        try {
            const auto bytes = read_file_bytes(manifest.root / entry.path);
            AudioClip clip = decode_wav(bytes, entry.path);
            clip = resample(clip, kCanonicalRate);
            const FeatureMatrix frames = extract_mfcc(clip, config);
            rows[i] = FeatureRow{entry.path, entry.label, aggregate(frames, aggregation)};
            ok[i] = 1;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i]) {
            result.store.rows.push_back(std::move(rows[i]));
        } else {
            result.failures.push_back(ClipFailure{manifest.entries[i].path, errors[i]});
        }
    }
    if (!result.failures.empty() && result.store.rows.empty()) {
        throw AllClipsFailed("all " + std::to_string(n) + " clips failed; first: " +
                             result.failures.front().path + " (" +
                             result.failures.front().reason + ")");
    }
    return result;
}

struct SynthSpec {
    std::size_t clips_per_class = 40;
    int sample_rate = kCanonicalRate;
    double seconds = 2.0;
};

namespace detail {

inline const std::vector<std::string>& synth_class_names() {
    static const std::vector<std::string> names = {
        "silence",     "quietness",    "tone_440", "tone_1000",
        "square_wave", "chirp",        "noise_bursts", "am_noise"};
    return names;
}

inline std::vector<double> synth_samples(const std::string& cls, std::size_t n, int sample_rate,
                                         Rng& rng) {
    std::vector<double> s(n, 0.0);
    const double sr = static_cast<double>(sample_rate);
    constexpr double kTau = 6.283185307179586476925286766559;

    auto jitter = [&](double center, double rel) {
        return center * (1.0 + rel * (2.0 * rng.uniform() - 1.0));
    };

    if (cls == "silence") {
        return s;
    }
    if (cls == "quietness") {
        // white noise at -60 dBFS
        for (auto& v : s) v = std::clamp(0.001 * rng.gaussian(), -0.99, 0.99);
        return s;
    }
    if (cls == "tone_440" || cls == "tone_1000") {
        const double f = jitter(cls == "tone_440" ? 440.0 : 1000.0, 0.02);
        const double amp = 0.4 + 0.2 * rng.uniform();
        const double phase = kTau * rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = amp * std::sin(kTau * f * static_cast<double>(i) / sr + phase);
        }
        return s;
    }
    if (cls == "square_wave") {
        const double f = jitter(300.0, 0.05);
        const double amp = 0.35 + 0.1 * rng.uniform();
        const double phase = kTau * rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::sin(kTau * f * static_cast<double>(i) / sr + phase);
            s[i] = x >= 0.0 ? amp : -amp;
        }
        return s;
    }
    if (cls == "chirp") {
        const double f0 = jitter(200.0, 0.1);
        const double f1 = jitter(4000.0, 0.1);
        const double amp = 0.4 + 0.2 * rng.uniform();
        const double total = static_cast<double>(n) / sr;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sr;
            const double phase = kTau * (f0 * t + (f1 - f0) * t * t / (2.0 * total));
            s[i] = amp * std::sin(phase);
        }
        return s;
    }
    if (cls == "noise_bursts") {
        const double period = jitter(0.25, 0.1);
        const double burst = 0.05;
        const double amp = 0.4 + 0.2 * rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sr;
            const double pos = t - period * std::floor(t / period);
            s[i] = pos < burst ? std::clamp(amp * 0.5 * rng.gaussian(), -0.99, 0.99) : 0.0;
        }
        return s;
    }
    if (cls == "am_noise") {
        // low-passed noise under a slow sinusoidal envelope that never closes
        const double fm = jitter(4.0, 0.2);
        const double amp = 0.3 + 0.2 * rng.uniform();
        const double phase = kTau * rng.uniform();
        constexpr std::size_t kTaps = 8;
        std::vector<double> white(n + kTaps, 0.0);
        for (auto& v : white) v = rng.gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kTaps; ++k) acc += white[i + k];
            const double t = static_cast<double>(i) / sr;
            const double envelope = 0.4 + 0.3 * (1.0 + std::sin(kTau * fm * t + phase));
            s[i] = std::clamp(amp * envelope * acc / static_cast<double>(kTaps), -0.99, 0.99);
        }
        return s;
    }
    throw Error("unknown synthetic class '" + cls + "'");
}

} // namespace detail

// Writes a deterministic 8-class corpus of WAV clips plus its manifest and
// returns the manifest. Each clip gets its own generator stream keyed on
// (seed, class, clip index), so output is independent of generation order.
inline Manifest synth_corpus(const SynthSpec& spec, std::uint64_t seed,
                             const std::filesystem::path& out_dir) {
    if (spec.clips_per_class == 0) throw Error("clips_per_class must be positive");
    if (spec.sample_rate <= 0) throw Error("sample_rate must be positive");
    if (!(spec.seconds > 0.0)) throw Error("seconds must be positive");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoFailure("cannot create " + out_dir.string() + ": " + ec.message());

    Manifest manifest;
    manifest.root = out_dir;
    manifest.class_set = detail::synth_class_names();
    std::sort(manifest.class_set.begin(), manifest.class_set.end());

    const auto n_samples =
        static_cast<std::size_t>(std::llround(spec.seconds * spec.sample_rate));

    for (const auto& cls : detail::synth_class_names()) {
        std::filesystem::create_directories(out_dir / cls, ec);
        if (ec) throw IoFailure("cannot create " + (out_dir / cls).string() + ": " + ec.message());
        for (std::size_t j = 0; j < spec.clips_per_class; ++j) {
            Rng rng(fnv1a(cls + "/" + std::to_string(j) + "#" + std::to_string(seed)));
            AudioClip clip;
            clip.sample_rate = spec.sample_rate;
            clip.samples = detail::synth_samples(cls, n_samples, spec.sample_rate, rng);

            char name[64];
            std::snprintf(name, sizeof name, "%s_%03zu.wav", cls.c_str(), j);
            const std::string rel = cls + "/" + name;
            write_file_bytes(out_dir / rel, encode_wav_pcm16(clip));
            manifest.entries.push_back(ManifestEntry{rel, cls});
        }
    }
    save_manifest(manifest, out_dir / "manifest.csv");
    return manifest;
}

} // namespace hark
