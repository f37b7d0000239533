#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hark/errors.hpp"
#include "hark/knn.hpp"
#include "hark/svm.hpp"
#include "hark/util.hpp"

namespace hark {

struct SavedModel {
    std::string algo; // "knn" or "svm"
    std::string feature_config;
    std::string feature_fingerprint;
    KnnModel knn;
    MulticlassSvm svm;
};

namespace detail {

inline std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

inline std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(trim(part)));
    return out;
}

class ModelReader {
public:
    ModelReader(std::istream& in, std::string origin) : in_(in), origin_(std::move(origin)) {}

    // next `key=value` line; blank lines skipped
    std::pair<std::string, std::string> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw fail("expected key=value, got '" + line + "'");
            return {line.substr(0, eq), line.substr(eq + 1)};
        }
        throw fail("unexpected end of file");
    }

    std::string expect(const std::string& key) {
        auto [k, v] = next();
        if (k != key) throw fail("expected key '" + key + "', got '" + k + "'");
        return v;
    }

    ParseError fail(const std::string& why) const {
        return ParseError(origin_ + " line " + std::to_string(line_no_) + ": " + why);
    }

private:
    std::istream& in_;
    std::string origin_;
    std::size_t line_no_ = 0;
};

inline void write_scaler(std::string& out, const Scaler& scaler) {
    out += "dim=" + std::to_string(scaler.mean.size()) + "\n";
    out += "mean=" + join_doubles(scaler.mean) + "\n";
    out += "std=" + join_doubles(scaler.std_dev) + "\n";
}

inline Scaler read_scaler(ModelReader& reader) {
    const auto dim = static_cast<std::size_t>(parse_long(reader.expect("dim")));
    Scaler scaler;
    scaler.mean = split_doubles(reader.expect("mean"));
    scaler.std_dev = split_doubles(reader.expect("std"));
    if (scaler.mean.size() != dim || scaler.std_dev.size() != dim) {
        throw reader.fail("scaler length disagrees with dim");
    }
    return scaler;
}

// label may contain commas only if values cannot: parse `dim` doubles off the
// end, the remainder is the label
inline std::pair<std::string, std::vector<double>> read_labeled_row(ModelReader& reader,
                                                                    const std::string& key,
                                                                    std::size_t dim) {
    std::string rest = reader.expect(key);
    std::vector<double> values(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const auto comma = rest.rfind(',');
        if (comma == std::string::npos) throw reader.fail("too few fields in " + key);
        values[dim - 1 - k] = parse_double(trim(rest.substr(comma + 1)));
        rest = rest.substr(0, comma);
    }
    return {rest, std::move(values)};
}

} // namespace detail

inline std::string serialize_model(const KnnModel& model, const std::string& feature_config,
                                   const std::string& feature_fingerprint) {
    std::string out = "hark-model-v1\n";
    out += "algo=knn\n";
    out += "config=" + feature_config + "\n";
    out += "fingerprint=" + feature_fingerprint + "\n";
    out += "k=" + std::to_string(model.config.k) + "\n";
    out += "distance=" + std::string(to_string(model.config.distance)) + "\n";
    detail::write_scaler(out, model.scaler);
    out += "rows=" + std::to_string(model.train_x.size()) + "\n";
    for (std::size_t i = 0; i < model.train_x.size(); ++i) {
        out += "row=" + model.train_y[i] + "," + detail::join_doubles(model.train_x[i]) + "\n";
    }
    return out;
}

inline std::string serialize_model(const MulticlassSvm& model, const std::string& feature_config,
                                   const std::string& feature_fingerprint) {
    std::string out = "hark-model-v1\n";
    out += "algo=svm\n";
    out += "config=" + feature_config + "\n";
    out += "fingerprint=" + feature_fingerprint + "\n";
    out += "gamma=" + format_double(model.params.gamma) + "\n";
    out += "c=" + format_double(model.params.c) + "\n";
    detail::write_scaler(out, model.scaler);
    out += "classes=";
    for (std::size_t i = 0; i < model.class_set.size(); ++i) {
        if (i > 0) out += ",";
        out += model.class_set[i];
    }
    out += "\n";
    out += "converged=" + std::string(model.converged ? "1" : "0") + "\n";
    out += "machines=" + std::to_string(model.machines.size()) + "\n";
    for (const auto& machine : model.machines) {
        out += "pair=" + machine.class_pair.first + "," + machine.class_pair.second + "\n";
        out += "bias=" + format_double(machine.bias) + "\n";
        out += "pair_converged=" + std::string(machine.converged ? "1" : "0") + "\n";
        out += "svs=" + std::to_string(machine.support_vectors.size()) + "\n";
        for (std::size_t i = 0; i < machine.support_vectors.size(); ++i) {
            out += "sv=" + format_double(machine.dual_coef[i]) + "," +
                   detail::join_doubles(machine.support_vectors[i]) + "\n";
        }
    }
    return out;
}

inline void save_model(const KnnModel& model, const std::string& feature_config,
                       const std::string& feature_fingerprint,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << serialize_model(model, feature_config, feature_fingerprint);
    if (!out) throw IoFailure("write failed on " + path.string());
}

inline void save_model(const MulticlassSvm& model, const std::string& feature_config,
                       const std::string& feature_fingerprint,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << serialize_model(model, feature_config, feature_fingerprint);
    if (!out) throw IoFailure("write failed on " + path.string());
}

inline SavedModel parse_model(std::istream& in, const std::string& origin) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError(origin + ": empty model file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "hark-model-v1") {
        throw ParseError(origin + ": unrecognized model header '" + header + "'");
    }

    detail::ModelReader reader(in, origin);
    SavedModel model;
    model.algo = reader.expect("algo");
    model.feature_config = reader.expect("config");
    model.feature_fingerprint = reader.expect("fingerprint");

    if (model.algo == "knn") {
        KnnConfig config;
        config.k = static_cast<std::size_t>(parse_long(reader.expect("k")));
        config.distance = distance_from_string(reader.expect("distance"));
        model.knn.config = config;
        model.knn.scaler = detail::read_scaler(reader);
        const auto dim = model.knn.scaler.mean.size();
        const auto rows = static_cast<std::size_t>(parse_long(reader.expect("rows")));
        for (std::size_t i = 0; i < rows; ++i) {
            auto [label, values] = detail::read_labeled_row(reader, "row", dim);
            model.knn.train_y.push_back(std::move(label));
            model.knn.train_x.push_back(std::move(values));
        }
        if (model.knn.train_x.size() < config.k) {
            throw ParseError(origin + ": fewer rows than k");
        }
        return model;
    }
    if (model.algo == "svm") {
        model.svm.params.gamma = parse_double(reader.expect("gamma"));
        model.svm.params.c = parse_double(reader.expect("c"));
        model.svm.params.validate();
        model.svm.scaler = detail::read_scaler(reader);
        const auto dim = model.svm.scaler.mean.size();
        for (const auto& part : split(reader.expect("classes"), ',')) {
            model.svm.class_set.push_back(trim(part));
        }
        if (model.svm.class_set.size() < 2) throw ParseError(origin + ": fewer than 2 classes");
        model.svm.converged = parse_long(reader.expect("converged")) != 0;
        const auto machines = static_cast<std::size_t>(parse_long(reader.expect("machines")));
        for (std::size_t m = 0; m < machines; ++m) {
            BinarySvm machine;
            machine.params = model.svm.params;
            const auto pair_parts = split(reader.expect("pair"), ',');
            if (pair_parts.size() != 2) throw ParseError(origin + ": malformed pair line");
            machine.class_pair = {trim(pair_parts[0]), trim(pair_parts[1])};
            machine.bias = parse_double(reader.expect("bias"));
            machine.converged = parse_long(reader.expect("pair_converged")) != 0;
            const auto svs = static_cast<std::size_t>(parse_long(reader.expect("svs")));
            for (std::size_t i = 0; i < svs; ++i) {
                auto [coef, values] = detail::read_labeled_row(reader, "sv", dim);
                machine.dual_coef.push_back(parse_double(coef));
                machine.support_vectors.push_back(std::move(values));
            }
            model.svm.machines.push_back(std::move(machine));
        }
        return model;
    }
    throw ParseError(origin + ": unknown algorithm '" + model.algo + "'");
}

inline SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    return parse_model(in, path.string());
}

} // namespace hark
