#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hark/errors.hpp"
#include "hark/features.hpp"

namespace hark {

enum class DistanceKind { Euclidean, Manhattan, Chebyshev };

inline std::string to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::Euclidean: return "euclidean";
        case DistanceKind::Manhattan: return "manhattan";
        case DistanceKind::Chebyshev: return "chebyshev";
    }
    return "euclidean";
}

inline DistanceKind distance_from_string(const std::string& name) {
    if (name == "euclidean") return DistanceKind::Euclidean;
    if (name == "manhattan") return DistanceKind::Manhattan;
    if (name == "chebyshev") return DistanceKind::Chebyshev;
    throw ParseError("unknown distance '" + name + "'");
}

inline double distance(std::span<const double> q, std::span<const double> p,
                       DistanceKind kind) {
    if (q.size() != p.size()) {
        throw DimensionMismatch("distance between " + std::to_string(q.size()) + "-dim and " +
                                std::to_string(p.size()) + "-dim vectors");
    }
    double acc = 0.0;
    switch (kind) {
        case DistanceKind::Euclidean:
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double d = q[i] - p[i];
                acc += d * d;
            }
            return std::sqrt(acc);
        case DistanceKind::Manhattan:
            for (std::size_t i = 0; i < q.size(); ++i) acc += std::abs(q[i] - p[i]);
            return acc;
        case DistanceKind::Chebyshev:
            for (std::size_t i = 0; i < q.size(); ++i) {
                acc = std::max(acc, std::abs(q[i] - p[i]));
            }
            return acc;
    }
    return acc;
}

struct KnnConfig {
    std::size_t k = 1;
    DistanceKind distance = DistanceKind::Euclidean;
};

struct Neighbor {
    std::size_t index = 0;
    double dist = 0.0;
    std::string label;
};

// Lazy learner: fit standardizes and stores the training set, prediction is
// an exhaustive scan. At n ~ 3000, d ~ 13 brute force is fast and stays
// exactly equivalent to a full-sort oracle.
struct KnnModel {
    std::vector<std::vector<double>> train_x; // standardized rows
    std::vector<std::string> train_y;
    KnnConfig config;
    Scaler scaler;
};

inline KnnModel knn_fit(const std::vector<std::vector<double>>& x,
                        const std::vector<std::string>& y, const KnnConfig& config) {
    if (config.k == 0) throw Error("k must be at least 1");
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");
    if (x.size() < config.k) {
        throw TooFewSamples("k=" + std::to_string(config.k) + " exceeds " +
                            std::to_string(x.size()) + " training samples");
    }
    KnnModel model;
    model.config = config;
    model.scaler = fit_scaler(x);
    model.train_x.reserve(x.size());
    for (const auto& row : x) model.train_x.push_back(model.scaler.apply(row));
    model.train_y = y;
    return model;
}

// Distance ties are broken by lower training index. A vote tie goes to the
// tied class holding the nearest neighbor, walking outward until one of the
// tied classes appears.
inline std::pair<std::string, std::vector<Neighbor>> knn_predict(
    const KnnModel& model, std::span<const double> x) {
    const auto q = model.scaler.apply(x);

    std::vector<std::pair<double, std::size_t>> order(model.train_x.size());
    for (std::size_t i = 0; i < model.train_x.size(); ++i) {
        order[i] = {distance(q, model.train_x[i], model.config.distance), i};
    }
    std::sort(order.begin(), order.end());

    std::vector<Neighbor> neighbors(model.config.k);
    std::vector<std::string> classes;
    std::vector<std::size_t> votes;
    for (std::size_t j = 0; j < model.config.k; ++j) {
        const auto [d, i] = order[j];
        neighbors[j] = {i, d, model.train_y[i]};
        const auto it = std::find(classes.begin(), classes.end(), model.train_y[i]);
        if (it == classes.end()) {
            classes.push_back(model.train_y[i]);
            votes.push_back(1);
        } else {
            ++votes[static_cast<std::size_t>(it - classes.begin())];
        }
    }

    const std::size_t top = *std::max_element(votes.begin(), votes.end());
    std::vector<std::string> tied;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (votes[c] == top) tied.push_back(classes[c]);
    }
    if (tied.size() == 1) return {tied.front(), neighbors};
    for (const auto& nb : neighbors) {
        if (std::find(tied.begin(), tied.end(), nb.label) != tied.end()) {
            return {nb.label, neighbors};
        }
    }
    return {tied.front(), neighbors}; // unreachable: every neighbor's class voted
}

} // namespace hark
