// Standalone acceptance gate. Each criterion prints one PASS/FAIL line with
// its wall time; the process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "hark/dataset.hpp"
#include "hark/dsp.hpp"
#include "hark/knn.hpp"
#include "hark/model_selection.hpp"
#include "hark/svm.hpp"
#include "hark/util.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace hark;

namespace {

struct Criterion {
    std::string name;
    double budget_seconds; // 0 means no explicit budget
    std::function<void(std::vector<std::string>&)> body;
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string fmt(double v) { return format_double(v); }

// ---- criterion 1: DSP oracles ------------------------------------------

void check_dsp(std::vector<std::string>& notes) {
    Rng rng(101);
    double worst_fft = 0.0;
    double worst_parseval = 0.0;
    for (std::size_t n : {std::size_t{64}, std::size_t{256}}) {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> frame(n);
            for (auto& v : frame) v = rng.uniform(-1.0, 1.0);
            const auto fast = magnitude_spectrum(frame);
            const auto slow = oracle::dft_magnitude(frame);
            for (std::size_t k = 0; k < fast.size(); ++k) {
                worst_fft = std::max(worst_fft, std::abs(fast[k] - slow[k]));
            }
            const double te = oracle::time_energy(frame);
            const double fe = oracle::spectral_energy(fast, n);
            worst_parseval = std::max(worst_parseval, std::abs(fe - te) / te);
        }
    }
    notes.push_back("fft max abs err " + fmt(worst_fft));
    notes.push_back("parseval max rel err " + fmt(worst_parseval));
    expect(worst_fft <= 1e-6, "fft error above 1e-6");
    expect(worst_parseval <= 1e-6, "parseval error above 1e-6");

    // rows of the cepstral transform must be orthonormal: build the matrix by
    // transforming unit basis vectors, then check D * D^T against identity
    for (std::size_t n_coeffs : {std::size_t{12}, std::size_t{39}}) {
        const std::size_t m = 40;
        std::vector<std::vector<double>> d(n_coeffs, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> basis(m, 0.0);
            basis[i] = 1.0;
            const auto col = dct_ii(basis, n_coeffs);
            for (std::size_t k = 0; k < n_coeffs; ++k) d[k][i] = col[k];
        }
        double worst = 0.0;
        for (std::size_t a = 0; a < n_coeffs; ++a) {
            for (std::size_t b = 0; b < n_coeffs; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += d[a][i] * d[b][i];
                worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
            }
        }
        expect(worst < 1e-9, "dct rows not orthonormal at n_coeffs=" + std::to_string(n_coeffs));
    }

    double worst_mel = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double hz = 10.0 * std::pow(11025.0 / 10.0, i / 1000.0);
        worst_mel = std::max(worst_mel, std::abs(mel_to_hz(hz_to_mel(hz)) - hz) / hz);
        const double mel = 10.0 + (3900.0 - 10.0) * i / 1000.0;
        worst_mel = std::max(worst_mel, std::abs(hz_to_mel(mel_to_hz(mel)) - mel) / mel);
    }
    notes.push_back("mel round trip max rel err " + fmt(worst_mel));
    expect(worst_mel <= 1e-9, "mel round trip error above 1e-9");
}

// ---- criterion 2: SMO vs projected gradient ------------------------------

void check_box_equality(const BinarySvm& model, double c) {
    double sum = 0.0;
    for (double coef : model.dual_coef) {
        expect(std::abs(coef) <= c + 1e-9, "dual coefficient outside the box");
        sum += coef;
    }
    expect(std::abs(sum) <= 1e-6, "equality constraint violated: sum=" + fmt(sum));
}

void check_svm(std::vector<std::string>& notes) {
    Rng rng(2023);
    const SolverConfig precise{1e-9, 2000, 4000};
    double worst_gap = 0.0;

    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng.index(7);
        const std::size_t dim = 1 + rng.index(3);
        std::vector<std::vector<double>> x(n, std::vector<double>(dim));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& v : x[i]) v = rng.uniform(-2.0, 2.0);
            y[i] = i == 0 ? 1 : (i == 1 ? -1 : (rng.index(2) == 0 ? 1 : -1));
        }
        const double gamma = rng.uniform(0.3, 2.0);
        const double c = rng.uniform(0.2, 4.0);

        const auto model = smo_train_binary(x, y, {gamma, c}, precise);
        check_box_equality(model, c);

        std::vector<double> alpha(n, 0.0);
        for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
            bool found = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (model.support_vectors[s] == x[i]) {
                    alpha[i] = model.dual_coef[s] * y[i];
                    found = true;
                    break;
                }
            }
            expect(found, "support vector does not match any training row");
        }
        const auto gram = oracle::rbf_gram(x, gamma);
        const double obj_smo = oracle::dual_objective(alpha, y, gram);
        const auto pg = oracle::svm_dual_pg(x, y, gamma, c);
        worst_gap = std::max(worst_gap, std::abs(obj_smo - pg.objective));
        expect(std::abs(obj_smo - pg.objective) <= 1e-6,
               "dual objective gap " + fmt(obj_smo - pg.objective) + " at rep " +
                   std::to_string(rep));

        for (std::size_t i = 0; i < n; ++i) {
            const bool mine = decision_value(model, x[i]) >= 0.0;
            const bool ref = oracle::pg_decision(pg, x, y, gamma, x[i]) >= 0.0;
            expect(mine == ref, "train prediction mismatch at rep " + std::to_string(rep));
        }
    }
    notes.push_back("worst dual objective gap " + fmt(worst_gap));

    const std::vector<std::vector<double>> xor_x = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    const std::vector<int> xor_y = {1, 1, -1, -1};
    const auto xor_model = smo_train_binary(xor_x, xor_y, {1.0, 10.0}, precise);
    check_box_equality(xor_model, 10.0);
    for (std::size_t i = 0; i < 4; ++i) {
        const bool positive = decision_value(xor_model, xor_x[i]) >= 0.0;
        expect(positive == (xor_y[i] > 0), "xor fixture misclassified point " + std::to_string(i));
    }
    notes.push_back("xor fixture 4/4");
}

// ---- criterion 3: KNN vs brute force -------------------------------------

void check_knn(std::vector<std::string>& notes) {
    const std::pair<DistanceKind, oracle::Metric> metrics[] = {
        {DistanceKind::Euclidean, oracle::Metric::Euclidean},
        {DistanceKind::Manhattan, oracle::Metric::Manhattan},
        {DistanceKind::Chebyshev, oracle::Metric::Chebyshev},
    };
    Rng rng(9001);
    std::size_t checked = 0;
    for (const auto& [kind, metric] : metrics) {
        for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{10}}) {
            for (int rep = 0; rep < 200; ++rep) {
                const std::size_t n = k + 1 + rng.index(20);
                const std::size_t dim = 1 + rng.index(6);
                const std::size_t n_classes = 2 + rng.index(3);
                std::vector<std::vector<double>> x;
                std::vector<std::string> y;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i > 1 && rng.index(5) == 0) {
                        x.push_back(x[rng.index(i)]); // duplicates exercise ties
                    } else {
                        std::vector<double> row(dim);
                        for (auto& v : row) v = rng.uniform(-3.0, 3.0);
                        x.push_back(std::move(row));
                    }
                    y.push_back("c" + std::to_string(rng.index(n_classes)));
                }
                std::vector<double> q(dim);
                for (auto& v : q) v = rng.uniform(-3.0, 3.0);

                const auto model = knn_fit(x, y, {k, kind});
                const auto mine = knn_predict(model, q).first;
                const auto ref = oracle::brute_knn(x, y, q, k, metric);
                expect(mine == ref, "knn mismatch: " + mine + " vs " + ref + " (k=" +
                                        std::to_string(k) + ")");
                ++checked;
            }
        }
    }
    notes.push_back(std::to_string(checked) + " brute-force comparisons");

    // nearest three neighbors hold two squares and one circle: majority wins
    const std::vector<std::vector<double>> fig_x = {
        {1.0, 1.0}, {1.2, 0.9}, {0.8, 1.3}, {4.0, 4.0}, {4.2, 3.8}, {-3.0, 2.0}, {5.0, -2.0},
    };
    const std::vector<std::string> fig_y = {"square", "square", "circle", "circle",
                                            "circle", "square", "square"};
    const auto fig = knn_fit(fig_x, fig_y, {3, DistanceKind::Euclidean});
    const std::vector<double> fig_q = {1.0, 1.05};
    const auto [label, neighbors] = knn_predict(fig, fig_q);
    std::size_t squares = 0;
    for (std::size_t i = 0; i < 3; ++i) squares += neighbors[i].label == "square" ? 1 : 0;
    expect(squares == 2, "fixture neighborhood is not two squares and a circle");
    expect(label == "square", "fixture query not classified as square");
    notes.push_back("majority-vote fixture -> square");
}

// ---- criteria 4 and 5 share the synthetic corpus --------------------------

struct Corpus {
    testing::TempDir dir;
    std::filesystem::path store_path;
    FeatureStore store;
};

Corpus& corpus() {
    static Corpus c;
    return c;
}

std::string line_value(const std::string& text, const std::string& key) {
    const std::string marker = key + "=";
    std::size_t pos = text.find(marker);
    while (pos != std::string::npos) {
        if (pos == 0 || text[pos - 1] == '\n') {
            const auto start = pos + marker.size();
            const auto end = text.find('\n', start);
            return text.substr(start, end == std::string::npos ? end : end - start);
        }
        pos = text.find(marker, pos + 1);
    }
    return "";
}

testing::CliResult run_cli_ok(const std::string& args) {
    auto r = testing::run_cli(args, corpus().dir.path());
    expect(r.exit_code == 0, "cli exited " + std::to_string(r.exit_code) + " for: " + args +
                                 "\n" + r.err);
    return r;
}

void check_end_to_end(std::vector<std::string>& notes) {
    auto& c = corpus();
    const auto corpus_dir = c.dir / "corpus";
    c.store_path = c.dir / "store.csv";

    run_cli_ok("synth --out \"" + corpus_dir.string() + "\" --seed 42 --clips 40");
    run_cli_ok("extract --manifest \"" + (corpus_dir / "manifest.csv").string() +
               "\" --out \"" + c.store_path.string() + "\" --jobs 4");

    const auto knn_report = c.dir / "knn_report.txt";
    run_cli_ok("evaluate --store \"" + c.store_path.string() +
               "\" --algo knn --k 1 --distance manhattan --trials 20 --seed 42 --out \"" +
               knn_report.string() + "\"");
    const double knn_acc = parse_double(line_value(testing::read_text(knn_report), "accuracy"));
    notes.push_back("knn k=1 manhattan accuracy " + fmt(knn_acc));
    expect(knn_acc >= 0.95, "knn accuracy below 0.95");

    const auto grid = run_cli_ok("grid-search --store \"" + c.store_path.string() +
                                 "\" --out \"" + (c.dir / "surface.csv").string() +
                                 "\" --gamma 0.01,0.04,0.16 --c 1,3,10 --folds 5 --seed 42" +
                                 " --jobs 4");
    const std::string best_gamma = line_value(grid.out, "best_gamma");
    const std::string best_c = line_value(grid.out, "best_c");
    notes.push_back("grid best gamma=" + best_gamma + " c=" + best_c);

    const auto svm_report = c.dir / "svm_report.txt";
    run_cli_ok("evaluate --store \"" + c.store_path.string() + "\" --algo svm --gamma " +
               best_gamma + " --c " + best_c + " --trials 20 --seed 42 --out \"" +
               svm_report.string() + "\"");
    const double svm_acc = parse_double(line_value(testing::read_text(svm_report), "accuracy"));
    notes.push_back("svm grid-searched accuracy " + fmt(svm_acc));
    expect(svm_acc >= 0.95, "svm accuracy below 0.95");

    c.store = load_feature_store(c.store_path);
}

void check_trends(std::vector<std::string>& notes) {
    auto& c = corpus();
    expect(!c.store.rows.empty(), "synthetic store missing (end-to-end criterion failed?)");
    const auto x = c.store.matrix();
    const auto y = c.store.labels();

    for (DistanceKind kind :
         {DistanceKind::Euclidean, DistanceKind::Manhattan, DistanceKind::Chebyshev}) {
        auto run = [&](std::size_t k) {
            auto trainer = [&](const std::vector<std::vector<double>>& tx,
                               const std::vector<std::string>& ty) {
                auto model = knn_fit(tx, ty, {k, kind});
                return [model](std::span<const double> q) {
                    return knn_predict(model, q).first;
                };
            };
            return repeat_trials(x, y, 5, SplitSpec{0.25, true, 42}, trainer).accuracy;
        };
        const double acc1 = run(1);
        const double acc50 = run(50);
        notes.push_back(to_string(kind) + ": k=1 " + fmt(acc1) + " vs k=50 " + fmt(acc50));
        expect(acc1 >= acc50, "k=1 accuracy below k=50 for " + to_string(kind));
    }

    // training accuracy must not drop as the margin penalty grows
    Rng rng(2024);
    std::vector<std::vector<double>> bx;
    std::vector<int> by;
    for (int i = 0; i < 40; ++i) {
        bx.push_back({rng.gaussian(), rng.gaussian()});
        by.push_back(1);
        bx.push_back({0.8 + rng.gaussian(), 0.8 + rng.gaussian()});
        by.push_back(-1);
    }
    double prev = -1.0;
    std::string accs;
    for (double cval : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const auto model = smo_train_binary(bx, by, {0.5, cval}, {1e-4, 400, 4000});
        std::size_t correct = 0;
        for (std::size_t i = 0; i < bx.size(); ++i) {
            if ((decision_value(model, bx[i]) >= 0.0) == (by[i] > 0)) ++correct;
        }
        const double acc = static_cast<double>(correct) / static_cast<double>(bx.size());
        accs += (accs.empty() ? "" : " ") + fmt(acc);
        expect(acc >= prev, "training accuracy dropped at c=" + fmt(cval));
        prev = acc;
    }
    notes.push_back("svm train accuracy by c: " + accs);
}

// ---- criterion 6: timing protocol ----------------------------------------

void check_timing(std::vector<std::string>& notes) {
    Rng rng(6);
    const std::size_t n_classes = 6;
    const std::size_t per_class = 507; // 6 x 507 = 3042 rows
    std::vector<std::vector<double>> x;
    std::vector<std::string> y;
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> row(13);
            for (auto& v : row) v = static_cast<double>(c) + rng.gaussian();
            x.push_back(std::move(row));
            y.push_back("class" + std::to_string(c));
        }
    }

    const auto [train_idx, test_idx] = stratified_split(y, SplitSpec{0.25, true, 42});
    std::vector<std::vector<double>> train_x;
    std::vector<std::string> train_y;
    for (std::size_t i : train_idx) {
        train_x.push_back(x[i]);
        train_y.push_back(y[i]);
    }

    // the clock starts after feature extraction: the store rows are the input
    auto [model, fit_seconds] =
        timed([&] { return knn_fit(train_x, train_y, {1, DistanceKind::Euclidean}); });
    const double predict_seconds = timed([&] {
        for (std::size_t i : test_idx) knn_predict(model, x[i]);
    });
    notes.push_back("fit " + fmt(fit_seconds) + "s + predict " + fmt(predict_seconds) + "s on " +
                    std::to_string(train_idx.size()) + "/" + std::to_string(test_idx.size()) +
                    " rows");
    expect(fit_seconds + predict_seconds < 1.0, "knn fit+predict took " +
                                                    fmt(fit_seconds + predict_seconds) + "s");
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"dsp transforms match direct-form oracles", 10.0, check_dsp},
        {"smo matches projected-gradient dual oracle", 30.0, check_svm},
        {"knn matches full-sort brute force", 0.0, check_knn},
        {"synthetic end-to-end run reaches 0.95 accuracy", 300.0, check_end_to_end},
        {"accuracy trends: knn k, svm c", 0.0, check_trends},
        {"post-extraction knn timing under one second", 0.0, check_timing},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& criterion = criteria[i];
        std::vector<std::string> notes;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(notes);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();

        bool pass = error.empty();
        if (pass && criterion.budget_seconds > 0.0 && elapsed > criterion.budget_seconds) {
            pass = false;
            error = "exceeded budget of " + fmt(criterion.budget_seconds) + "s";
        }
        if (!pass) ++failures;

        std::printf("[%zu] %-48s %s (%.2fs)\n", i + 1, criterion.name.c_str(),
                    pass ? "PASS" : "FAIL", elapsed);
        for (const auto& note : notes) std::printf("      %s\n", note.c_str());
        if (!error.empty()) std::printf("      failure: %s\n", error.c_str());
    }

    std::printf("%s: %d of %zu criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED",
                failures, criteria.size());
    return failures;
}
