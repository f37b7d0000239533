#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hark/errors.hpp"
#include "hark/parallel.hpp"
#include "hark/svm.hpp"
#include "hark/util.hpp"

namespace hark {

struct SplitSpec {
    double test_fraction = 0.25;
    bool stratified = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
            throw Error("test_fraction must lie in (0, 1)");
        }
    }
};

struct GridSpec {
    std::vector<double> gamma_values;
    std::vector<double> c_values;
    std::size_t n_folds = 5;

    void validate() const {
        if (gamma_values.empty() || c_values.empty()) throw Error("grid axes must be non-empty");
        for (double g : gamma_values)
            if (!(g > 0.0)) throw Error("gamma values must be positive");
        for (double c : c_values)
            if (!(c > 0.0)) throw Error("C values must be positive");
        if (n_folds < 2) throw Error("n_folds must be at least 2");
    }
};

struct ConfusionMatrix {
    std::vector<std::string> class_set;
    std::vector<std::vector<std::size_t>> counts; // rows = true class, columns = predicted

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> classes)
        : class_set(std::move(classes)),
          counts(class_set.size(), std::vector<std::size_t>(class_set.size(), 0)) {}

    std::size_t index_of(const std::string& label) const {
        const auto it = std::find(class_set.begin(), class_set.end(), label);
        if (it == class_set.end()) throw UnknownLabel("label '" + label + "' not in class set");
        return static_cast<std::size_t>(it - class_set.begin());
    }

    void add(const std::string& truth, const std::string& predicted) {
        ++counts[index_of(truth)][index_of(predicted)];
    }

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& row : counts)
            for (std::size_t v : row) t += v;
        return t;
    }

    std::size_t trace() const {
        std::size_t t = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
        return t;
    }

    double accuracy() const {
        const std::size_t n = total();
        return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
    }

    std::vector<double> per_class_accuracy() const {
        std::vector<double> out(counts.size(), 0.0);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            std::size_t row = 0;
            for (std::size_t v : counts[i]) row += v;
            if (row > 0) out[i] = static_cast<double>(counts[i][i]) / static_cast<double>(row);
        }
        return out;
    }
};

struct EvalReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
    double train_seconds = 0.0;
    double test_seconds = 0.0;
    std::vector<double> trial_accuracies;
};

inline ConfusionMatrix confusion_matrix(const std::vector<std::string>& y_true,
                                        const std::vector<std::string>& y_pred,
                                        std::vector<std::string> class_set) {
    if (y_true.size() != y_pred.size()) throw LengthMismatch("y_true/y_pred length mismatch");
    ConfusionMatrix m(std::move(class_set));
    for (std::size_t i = 0; i < y_true.size(); ++i) m.add(y_true[i], y_pred[i]);
    return m;
}

// Wall-clock a callable on the monotonic clock. Returns (result, seconds),
// or just seconds for void callables.
template <typename F>
auto timed(F&& op) {
    using R = std::invoke_result_t<F&>;
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<R>) {
        op();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        return dt.count();
    } else {
        R result = op();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        return std::pair<R, double>(std::move(result), dt.count());
    }
}

namespace detail {

inline std::vector<std::string> sorted_classes(const std::vector<std::string>& y) {
    std::vector<std::string> classes = y;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

inline std::vector<std::vector<std::size_t>> indices_by_class(
    const std::vector<std::string>& y, const std::vector<std::string>& classes) {
    std::vector<std::vector<std::size_t>> out(classes.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), y[i]);
        out[static_cast<std::size_t>(it - classes.begin())].push_back(i);
    }
    return out;
}

} // namespace detail

// Seeded train/test partition. Stratified mode draws round(fraction * n) test
// samples per class, clamped so both sides keep at least one sample of it.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<std::string>& y, const SplitSpec& spec) {
    spec.validate();
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    Rng rng(spec.seed);

    auto deal = [&](std::vector<std::size_t>& pool) {
        seeded_shuffle(pool, rng);
        const auto n = pool.size();
        auto n_test = static_cast<std::size_t>(
            std::llround(spec.test_fraction * static_cast<double>(n)));
        n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
        test.insert(test.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_test));
        train.insert(train.end(), pool.begin() + static_cast<std::ptrdiff_t>(n_test), pool.end());
    };

    if (spec.stratified) {
        const auto classes = detail::sorted_classes(y);
        auto by_class = detail::indices_by_class(y, classes);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (by_class[c].size() < 2) {
                throw ClassTooSmall("class '" + classes[c] + "' has " +
                                    std::to_string(by_class[c].size()) +
                                    " samples; stratified split needs at least 2");
            }
            deal(by_class[c]);
        }
    } else {
        if (y.size() < 2) throw TooFewSamples("need at least 2 samples to split");
        std::vector<std::size_t> pool(y.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        deal(pool);
    }

    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

struct CvResult {
    double mean_accuracy = 0.0;
    std::vector<double> fold_accuracies;
};

// Stratified k-fold cross-validation. `trainer(train_x, train_y)` must return
// a callable mapping a feature vector to a label.
template <typename Trainer>
CvResult kfold_cv(const std::vector<std::vector<double>>& x, const std::vector<std::string>& y,
                  std::size_t n_folds, Trainer&& trainer, std::uint64_t seed = 0) {
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");
    if (n_folds < 2) throw Error("n_folds must be at least 2");

    const auto classes = detail::sorted_classes(y);
    auto by_class = detail::indices_by_class(y, classes);
    std::vector<std::size_t> fold_of(y.size(), 0);
    Rng rng(seed);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (by_class[c].size() < n_folds) {
            throw ClassTooSmall("class '" + classes[c] + "' has " +
                                std::to_string(by_class[c].size()) + " samples; " +
                                std::to_string(n_folds) + "-fold CV needs at least that many");
        }
        seeded_shuffle(by_class[c], rng);
        for (std::size_t i = 0; i < by_class[c].size(); ++i) {
            fold_of[by_class[c][i]] = i % n_folds;
        }
    }

    CvResult result;
    for (std::size_t f = 0; f < n_folds; ++f) {
        std::vector<std::vector<double>> train_x;
        std::vector<std::string> train_y;
        std::vector<std::size_t> val_idx;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (fold_of[i] == f) {
                val_idx.push_back(i);
            } else {
                train_x.push_back(x[i]);
                train_y.push_back(y[i]);
            }
        }
        auto predictor = trainer(train_x, train_y);
        std::size_t correct = 0;
        for (std::size_t i : val_idx) {
            if (predictor(x[i]) == y[i]) ++correct;
        }
        result.fold_accuracies.push_back(static_cast<double>(correct) /
                                         static_cast<double>(val_idx.size()));
    }
    for (double a : result.fold_accuracies) result.mean_accuracy += a;
    result.mean_accuracy /= static_cast<double>(n_folds);
    return result;
}

struct GridResult {
    SvmHyperparams best;
    double best_accuracy = 0.0;
    std::vector<double> gamma_values;
    std::vector<double> c_values;
    std::vector<std::vector<double>> surface;      // rows follow c_values, columns gamma_values
    std::vector<std::vector<std::uint8_t>> failed; // same shape; 1 = cell scored 0 due to error
    bool any_failed = false;
};

// Exhaustive CV accuracy over the (gamma, C) grid. Ties resolve toward the
// smaller gamma, then the smaller C. A cell whose training throws scores 0
// and is flagged instead of aborting the search.
inline GridResult grid_search(const std::vector<std::vector<double>>& x,
                              const std::vector<std::string>& y, const GridSpec& grid,
                              SolverConfig solver_config = {}, std::uint64_t seed = 0,
                              std::size_t jobs = 1) {
    grid.validate();
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");

    GridResult result;
    result.gamma_values = grid.gamma_values;
    result.c_values = grid.c_values;
    const std::size_t n_gamma = grid.gamma_values.size();
    const std::size_t n_c = grid.c_values.size();
    result.surface.assign(n_c, std::vector<double>(n_gamma, 0.0));
    result.failed.assign(n_c, std::vector<std::uint8_t>(n_gamma, 0));

    parallel_for(n_c * n_gamma, jobs, [&](std::size_t cell) {
        const std::size_t ci = cell / n_gamma;
        const std::size_t gi = cell % n_gamma;
        const SvmHyperparams params{grid.gamma_values[gi], grid.c_values[ci]};
        auto trainer = [&](const std::vector<std::vector<double>>& tx,
                           const std::vector<std::string>& ty) {
            auto model = ovo_fit(tx, ty, params, solver_config);
            return [model = std::move(model)](const std::vector<double>& q) {
                return ovo_predict(model, q).first;
            };
        };
        try {
            result.surface[ci][gi] = kfold_cv(x, y, grid.n_folds, trainer, seed).mean_accuracy;
        } catch (const std::exception&) {
            result.failed[ci][gi] = 1;
        }
    });

    bool first = true;
    for (std::size_t gi = 0; gi < n_gamma; ++gi) {
        for (std::size_t ci = 0; ci < n_c; ++ci) {
            result.any_failed = result.any_failed || result.failed[ci][gi] != 0;
            const double acc = result.surface[ci][gi];
            const SvmHyperparams params{grid.gamma_values[gi], grid.c_values[ci]};
            const bool better =
                first || acc > result.best_accuracy ||
                (acc == result.best_accuracy &&
                 (params.gamma < result.best.gamma ||
                  (params.gamma == result.best.gamma && params.c < result.best.c)));
            if (better) {
                result.best = params;
                result.best_accuracy = acc;
                first = false;
            }
        }
    }
    return result;
}

// Repeated split/train/evaluate protocol. Trials use seeds spec.seed + t.
// The report carries the summed confusion matrix, per-trial accuracies, and
// mean wall-clock train/test seconds.
template <typename Trainer>
EvalReport repeat_trials(const std::vector<std::vector<double>>& x,
                         const std::vector<std::string>& y, std::size_t n_trials,
                         const SplitSpec& spec, Trainer&& trainer) {
    if (n_trials < 1) throw Error("n_trials must be at least 1");
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");
    spec.validate();

    EvalReport report;
    report.confusion = ConfusionMatrix(detail::sorted_classes(y));
    double train_total = 0.0;
    double test_total = 0.0;

    for (std::size_t t = 0; t < n_trials; ++t) {
        SplitSpec trial_spec = spec;
        trial_spec.seed = spec.seed + t;
        const auto [train_idx, test_idx] = stratified_split(y, trial_spec);

        std::vector<std::vector<double>> train_x;
        std::vector<std::string> train_y;
        train_x.reserve(train_idx.size());
        train_y.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            train_x.push_back(x[i]);
            train_y.push_back(y[i]);
        }

        auto [predictor, train_sec] = timed([&] { return trainer(train_x, train_y); });
        train_total += train_sec;

        auto [predictions, test_sec] = timed([&] {
            std::vector<std::string> preds;
            preds.reserve(test_idx.size());
            for (std::size_t i : test_idx) preds.push_back(predictor(x[i]));
            return preds;
        });
        test_total += test_sec;

        std::size_t correct = 0;
        for (std::size_t j = 0; j < test_idx.size(); ++j) {
            report.confusion.add(y[test_idx[j]], predictions[j]);
            if (predictions[j] == y[test_idx[j]]) ++correct;
        }
        report.trial_accuracies.push_back(static_cast<double>(correct) /
                                          static_cast<double>(test_idx.size()));
    }

    report.accuracy = report.confusion.accuracy();
    report.per_class_accuracy = report.confusion.per_class_accuracy();
    report.train_seconds = train_total / static_cast<double>(n_trials);
    report.test_seconds = test_total / static_cast<double>(n_trials);
    return report;
}

} // namespace hark
