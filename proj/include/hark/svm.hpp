#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <list>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hark/errors.hpp"
#include "hark/features.hpp"

namespace hark {

struct SvmHyperparams {
    double gamma = 1.0; // RBF width; sigma = sqrt(1/(2*gamma))
    double c = 1.0;     // soft-margin penalty

    void validate() const {
        if (!(gamma > 0.0)) throw Error("gamma must be positive");
        if (!(c > 0.0)) throw Error("C must be positive");
    }
};

struct SolverConfig {
    double kkt_tol = 1e-3;
    std::size_t max_passes = 200;  // full sweeps before giving up
    std::size_t cache_rows = 4000; // kernel rows kept resident (full Gram for a few thousand samples)
};

inline double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("kernel between " + std::to_string(x.size()) + "-dim and " +
                                std::to_string(y.size()) + "-dim vectors");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

struct BinarySvm {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coef; // alpha_i * y_i, nonzero entries only
    double bias = 0.0;
    SvmHyperparams params;
    std::pair<std::string, std::string> class_pair; // (negative, positive)
    bool converged = true;
};

inline double decision_value(const BinarySvm& model, std::span<const double> x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        f += model.dual_coef[i] * rbf_kernel(model.support_vectors[i], x, model.params.gamma);
    }
    return f;
}

// f(x) = 0 counts as the positive class.
inline const std::string& binary_label(const BinarySvm& model, double f) {
    return f >= 0.0 ? model.class_pair.second : model.class_pair.first;
}

namespace detail {

// LRU cache of kernel rows. Fits the whole Gram matrix whenever n <= max_rows.
class KernelRowCache {
public:
    KernelRowCache(const std::vector<std::vector<double>>& x, double gamma,
                   std::size_t max_rows)
        : x_(x), gamma_(gamma), max_rows_(std::max<std::size_t>(max_rows, 2)) {
        sq_norms_.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            double s = 0.0;
            for (double v : x[i]) s += v * v;
            sq_norms_[i] = s;
        }
    }

    const std::vector<double>& row(std::size_t i) {
        auto it = index_.find(i);
        if (it != index_.end()) {
            rows_.splice(rows_.begin(), rows_, it->second);
            return it->second->second;
        }
        if (rows_.size() >= max_rows_) {
            index_.erase(rows_.back().first);
            rows_.pop_back();
        }
        rows_.emplace_front(i, compute_row(i));
        index_[i] = rows_.begin();
        return rows_.front().second;
    }

private:
    std::vector<double> compute_row(std::size_t i) const {
        const std::size_t n = x_.size();
        std::vector<double> out(n);
        const auto& xi = x_[i];
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            const auto& xj = x_[j];
            for (std::size_t d = 0; d < xi.size(); ++d) dot += xi[d] * xj[d];
            out[j] = std::exp(-gamma_ * (sq_norms_[i] + sq_norms_[j] - 2.0 * dot));
        }
        return out;
    }

    const std::vector<std::vector<double>>& x_;
    double gamma_;
    std::size_t max_rows_;
    std::vector<double> sq_norms_;
    std::list<std::pair<std::size_t, std::vector<double>>> rows_;
    std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

// Platt-style SMO over the standard dual:
//   max W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
//   s.t. 0 <= a_i <= C, sum a_i y_i = 0.
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
              SvmHyperparams params, SolverConfig config)
        : x_(x), y_(y), c_(params.c), tol_(config.kkt_tol), config_(config),
          cache_(x, params.gamma, config.cache_rows), n_(x.size()),
          alpha_(x.size(), 0.0), err_(x.size()) {
        for (std::size_t i = 0; i < n_; ++i) err_[i] = -static_cast<double>(y_[i]);
    }

    bool solve() {
        bool examine_all = true;
        std::size_t full_passes = 0;
        std::size_t sweeps = 0;
        const std::size_t sweep_cap = config_.max_passes * 100 + 100;

        while (true) {
            std::size_t changed = 0;
            if (examine_all) {
                ++full_passes;
                for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (is_free(alpha_[i])) changed += examine(i);
                }
            }
            if (examine_all) {
                if (changed == 0) {
                    finalize_bias();
                    if (max_kkt_violation() <= tol_) return true;
                    if (full_passes >= config_.max_passes) return false;
                    // bias recentring exposed a borderline violator; keep going
                } else {
                    examine_all = false;
                }
            } else if (changed == 0) {
                examine_all = true;
            }
            if (full_passes >= config_.max_passes || ++sweeps >= sweep_cap) {
                finalize_bias();
                return max_kkt_violation() <= tol_;
            }
        }
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }

    double max_kkt_violation() {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double ye = y_[i] * err_[i]; // y*f(x) - 1
            if (alpha_[i] < c_ - kBoundEps) worst = std::max(worst, -ye);
            if (alpha_[i] > kBoundEps) worst = std::max(worst, ye);
        }
        return worst;
    }

private:
    static constexpr double kBoundEps = 1e-12;
    static constexpr double kStepEps = 1e-12;

    bool is_free(double a) const { return a > kBoundEps && a < c_ - kBoundEps; }

    int examine(std::size_t i2) {
        const double e2 = err_[i2];
        const double r2 = e2 * y_[i2];
        const bool violates = (r2 < -tol_ && alpha_[i2] < c_ - kBoundEps) ||
                              (r2 > tol_ && alpha_[i2] > kBoundEps);
        if (!violates) return 0;

        // second-choice heuristic: the free point with the largest |E1 - E2|
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(alpha_[i])) continue;
            const double gap = std::abs(err_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        for (std::size_t t = 0; t < n_; ++t) {
            const std::size_t i1 = (scan_start_ + t) % n_;
            if (is_free(alpha_[i1]) && take_step(i1, i2)) {
                scan_start_ = i1 + 1;
                return 1;
            }
        }
        for (std::size_t t = 0; t < n_; ++t) {
            const std::size_t i1 = (scan_start_ + t) % n_;
            if (take_step(i1, i2)) {
                scan_start_ = i1 + 1;
                return 1;
            }
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1];
        const double a2 = alpha_[i2];
        const int y1 = y_[i1];
        const int y2 = y_[i2];
        const double e1 = err_[i1];
        const double e2 = err_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c_, c_ + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c_);
            hi = std::min(c_, a1 + a2);
        }
        if (hi - lo < kBoundEps) return false;

        const auto& row1 = cache_.row(i1);
        const double k11 = row1[i1];
        const double k12 = row1[i2];
        const auto& row2 = cache_.row(i2);
        const double k22 = row2[i2];
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_next;
        if (eta > 1e-15) {
            a2_next = a2 + y2 * (e1 - e2) / eta;
            a2_next = std::clamp(a2_next, lo, hi);
        } else {
            // flat (or numerically negative) curvature: compare dual gain at
            // the segment ends
            const double slope = y2 * (e1 - e2);
            const double gain_lo = slope * (lo - a2) - 0.5 * eta * (lo - a2) * (lo - a2);
            const double gain_hi = slope * (hi - a2) - 0.5 * eta * (hi - a2) * (hi - a2);
            if (gain_lo > gain_hi + kStepEps) a2_next = lo;
            else if (gain_hi > gain_lo + kStepEps) a2_next = hi;
            else return false;
        }
        if (std::abs(a2_next - a2) < kStepEps * (a2_next + a2 + kStepEps)) return false;

        double a1_next = a1 + s * (a2 - a2_next);
        a1_next = std::clamp(a1_next, 0.0, c_); // numeric dust only

        const double d1 = y1 * (a1_next - a1);
        const double d2 = y2 * (a2_next - a2);
        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        double b_next;
        if (is_free(a1_next)) b_next = b1;
        else if (is_free(a2_next)) b_next = b2;
        else b_next = 0.5 * (b1 + b2);

        const double db = b_next - b_;
        for (std::size_t k = 0; k < n_; ++k) {
            err_[k] += d1 * row1[k] + d2 * row2[k] + db;
        }
        alpha_[i1] = a1_next;
        alpha_[i2] = a2_next;
        b_ = b_next;
        return true;
    }

    // Bias from free support vectors, averaged; with none free, the midpoint
    // of the interval the bound points leave feasible.
    void finalize_bias() {
        double sum = 0.0;
        std::size_t free_count = 0;
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) {
            const double target = b_ - err_[i]; // value of b making y_i f(x_i) = 1
            if (is_free(alpha_[i])) {
                sum += target;
                ++free_count;
            } else if ((alpha_[i] <= kBoundEps) == (y_[i] > 0)) {
                lower = std::max(lower, target);
            } else {
                upper = std::min(upper, target);
            }
        }
        double b_next;
        if (free_count > 0) b_next = sum / static_cast<double>(free_count);
        else if (std::isinf(lower)) b_next = upper;
        else if (std::isinf(upper)) b_next = lower;
        else b_next = 0.5 * (lower + upper);

        const double db = b_next - b_;
        if (db != 0.0) {
            for (std::size_t k = 0; k < n_; ++k) err_[k] += db;
            b_ = b_next;
        }
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    double c_;
    double tol_;
    SolverConfig config_;
    KernelRowCache cache_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> err_; // err[i] = f(x_i) - y_i
    double b_ = 0.0;
    std::size_t scan_start_ = 0;
};

} // namespace detail

inline BinarySvm smo_train_binary(const std::vector<std::vector<double>>& x,
                                  const std::vector<int>& y, SvmHyperparams params,
                                  SolverConfig config = {},
                                  std::pair<std::string, std::string> class_pair = {"-1", "+1"}) {
    params.validate();
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");
    if (x.size() < 2) throw TooFewSamples("need at least 2 training samples");
    bool has_pos = false;
    bool has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw Error("binary labels must be -1 or +1");
    }
    if (!has_pos || !has_neg) {
        throw SingleClass("training set for pair (" + class_pair.first + ", " +
                          class_pair.second + ") contains a single class");
    }

    detail::SmoSolver solver(x, y, params, config);
    const bool converged = solver.solve();

    BinarySvm model;
    model.params = params;
    model.class_pair = std::move(class_pair);
    model.bias = solver.bias();
    model.converged = converged;
    const auto& alpha = solver.alphas();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (alpha[i] > 0.0) {
            model.support_vectors.push_back(x[i]);
            model.dual_coef.push_back(alpha[i] * y[i]);
        }
    }
    return model;
}

struct MulticlassSvm {
    std::vector<BinarySvm> machines; // one per unordered class pair
    std::vector<std::string> class_set;
    Scaler scaler;
    SvmHyperparams params;
    bool converged = true;
};

// One-vs-one: a binary machine per class pair, trained on that pair's samples
// only. The scaler is fitted on the full training set.
inline MulticlassSvm ovo_fit(const std::vector<std::vector<double>>& x,
                             const std::vector<std::string>& y, SvmHyperparams params,
                             SolverConfig config = {}) {
    params.validate();
    if (x.size() != y.size()) throw LengthMismatch("feature/label count mismatch");

    MulticlassSvm model;
    model.params = params;
    model.class_set = y;
    std::sort(model.class_set.begin(), model.class_set.end());
    model.class_set.erase(std::unique(model.class_set.begin(), model.class_set.end()),
                          model.class_set.end());
    if (model.class_set.size() < 2) throw SingleClass("need at least 2 classes");

    model.scaler = fit_scaler(x);
    std::vector<std::vector<double>> scaled;
    scaled.reserve(x.size());
    for (const auto& row : x) scaled.push_back(model.scaler.apply(row));

    const std::size_t k = model.class_set.size();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const std::string& neg = model.class_set[a];
            const std::string& pos = model.class_set[b];
            std::vector<std::vector<double>> pair_x;
            std::vector<int> pair_y;
            for (std::size_t i = 0; i < scaled.size(); ++i) {
                if (y[i] == neg) {
                    pair_x.push_back(scaled[i]);
                    pair_y.push_back(-1);
                } else if (y[i] == pos) {
                    pair_x.push_back(scaled[i]);
                    pair_y.push_back(1);
                }
            }
            try {
                model.machines.push_back(
                    smo_train_binary(pair_x, pair_y, params, config, {neg, pos}));
            } catch (const Error& e) {
                throw Error("pair (" + neg + ", " + pos + "): " + e.what());
            }
            model.converged = model.converged && model.machines.back().converged;
        }
    }
    return model;
}

// Majority vote over the pairwise machines. Ties go to the tied class with
// the larger accumulated |decision value|, then to class order.
inline std::pair<std::string, std::vector<std::size_t>> ovo_predict(
    const MulticlassSvm& model, std::span<const double> x) {
    const auto q = model.scaler.apply(x);
    std::vector<std::size_t> votes(model.class_set.size(), 0);
    std::vector<double> margin(model.class_set.size(), 0.0);

    auto class_index = [&](const std::string& label) {
        const auto it = std::lower_bound(model.class_set.begin(), model.class_set.end(), label);
        return static_cast<std::size_t>(it - model.class_set.begin());
    };

    for (const auto& machine : model.machines) {
        const double f = decision_value(machine, q);
        const std::size_t winner = class_index(binary_label(machine, f));
        ++votes[winner];
        margin[winner] += std::abs(f);
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && margin[c] > margin[best])) {
            best = c;
        }
    }
    return {model.class_set[best], votes};
}

} // namespace hark
