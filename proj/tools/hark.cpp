// Command-line front end: synth, extract, train, grid-search, evaluate,
// predict, benchmark. All outputs are plain structured text; every report
// header carries the seed that produced it.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "hark/hark.hpp"

namespace {

using namespace hark;

constexpr std::uint64_t kDefaultSeed = 42;

std::string join_strings(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string join_numbers(const std::vector<double>& values, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += sep;
        out += format_double(values[i]);
    }
    return out;
}

std::size_t effective_jobs(std::size_t jobs) { return jobs == 0 ? default_jobs() : jobs; }

void print_confusion(std::ostream& os, const ConfusionMatrix& m) {
    std::size_t width = 7;
    for (const auto& label : m.class_set) width = std::max(width, label.size());
    os << "confusion matrix (rows = true class, columns = predicted):\n";
    os << std::string(width + 2, ' ');
    for (const auto& label : m.class_set) {
        os << ' ' << std::string(width > label.size() ? width - label.size() : 0, ' ') << label;
    }
    os << '\n';
    for (std::size_t i = 0; i < m.class_set.size(); ++i) {
        const auto& label = m.class_set[i];
        os << "  " << label << std::string(width - label.size(), ' ');
        for (std::size_t j = 0; j < m.class_set.size(); ++j) {
            char cell[32];
            std::snprintf(cell, sizeof cell, " %*zu", static_cast<int>(width), m.counts[i][j]);
            os << cell;
        }
        os << '\n';
    }
}

struct StoreData {
    FeatureStore store;
    std::vector<std::vector<double>> x;
    std::vector<std::string> y;
};

StoreData load_store_data(const std::string& path) {
    StoreData data;
    data.store = load_feature_store(path);
    if (data.store.rows.empty()) throw Error("feature store '" + path + "' has no rows");
    data.x = data.store.matrix();
    data.y = data.store.labels();
    return data;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    std::uint64_t seed = kDefaultSeed;
    std::size_t clips = 40;
    double seconds = 2.0;
};

int run_synth(const SynthArgs& args) {
    SynthSpec spec;
    spec.clips_per_class = args.clips;
    spec.seconds = args.seconds;
    const Manifest manifest = synth_corpus(spec, args.seed, args.out_dir);
    std::cout << "seed=" << args.seed << "\n";
    std::cout << "classes=" << manifest.class_set.size() << "\n";
    std::cout << "clips=" << manifest.entries.size() << "\n";
    std::cout << "manifest=" << (std::filesystem::path(args.out_dir) / "manifest.csv").string()
              << "\n";
    return 0;
}

// ---- extract ----------------------------------------------------------------

struct ExtractArgs {
    std::string manifest_path;
    std::string out_path;
    std::size_t jobs = 0;
    std::string aggregate = "mean";
    MfccConfig config;
};

int run_extract(const ExtractArgs& args) {
    const Aggregation agg = aggregation_from_string(args.aggregate);
    const Manifest manifest = load_manifest(args.manifest_path);
    const BuildResult result =
        build_feature_store(manifest, args.config, agg, effective_jobs(args.jobs));
    save_feature_store(result.store, args.out_path);
    std::cout << "rows=" << result.store.rows.size() << "\n";
    std::cout << "dim=" << result.store.dim << "\n";
    std::cout << "fingerprint=" << result.store.fingerprint << "\n";
    std::cout << "failures=" << result.failures.size() << "\n";
    for (const auto& failure : result.failures) {
        std::cerr << "clip failed: " << failure.path << ": " << failure.reason << "\n";
    }
    return result.failures.empty() ? 0 : 1;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string store_path;
    std::string algo;
    std::string out_path;
    std::size_t k = 1;
    std::string distance = "manhattan";
    double gamma = 0.00167;
    double c = 3.0;
    double kkt_tol = 1e-3;
    std::size_t max_passes = 200;
};

int run_train(const TrainArgs& args) {
    const StoreData data = load_store_data(args.store_path);
    if (args.algo == "knn") {
        KnnConfig config{args.k, distance_from_string(args.distance)};
        auto [model, seconds] = timed([&] { return knn_fit(data.x, data.y, config); });
        save_model(model, data.store.config, data.store.fingerprint, args.out_path);
        std::cout << "algo=knn\nk=" << config.k << "\ndistance=" << to_string(config.distance)
                  << "\nrows=" << model.train_x.size() << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "train_seconds=%.6f\n", seconds);
        std::cout << buf;
        return 0;
    }
    if (args.algo == "svm") {
        SvmHyperparams params{args.gamma, args.c};
        params.validate();
        SolverConfig solver;
        solver.kkt_tol = args.kkt_tol;
        solver.max_passes = args.max_passes;
        auto [model, seconds] = timed([&] { return ovo_fit(data.x, data.y, params, solver); });
        save_model(model, data.store.config, data.store.fingerprint, args.out_path);
        std::cout << "algo=svm\ngamma=" << format_double(params.gamma)
                  << "\nc=" << format_double(params.c) << "\nmachines=" << model.machines.size()
                  << "\nconverged=" << (model.converged ? 1 : 0) << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "train_seconds=%.6f\n", seconds);
        std::cout << buf;
        if (!model.converged) {
            std::cerr << "warning: solver hit the pass limit before meeting the KKT tolerance;"
                         " model written with converged=0\n";
        }
        return 0;
    }
    throw Error("unknown algorithm '" + args.algo + "'");
}

// ---- grid-search ------------------------------------------------------------

struct GridArgs {
    std::string store_path;
    std::string out_path;
    std::vector<double> gammas;
    std::vector<double> cs;
    std::size_t folds = 5;
    std::uint64_t seed = kDefaultSeed;
    std::size_t jobs = 0;
    double kkt_tol = 1e-3;
    std::size_t max_passes = 200;
};

int run_grid_search(const GridArgs& args) {
    const StoreData data = load_store_data(args.store_path);
    GridSpec grid;
    grid.gamma_values = args.gammas;
    grid.c_values = args.cs;
    grid.n_folds = args.folds;
    SolverConfig solver;
    solver.kkt_tol = args.kkt_tol;
    solver.max_passes = args.max_passes;

    const GridResult result =
        grid_search(data.x, data.y, grid, solver, args.seed, effective_jobs(args.jobs));

    std::size_t failed_cells = 0;
    for (const auto& row : result.failed)
        for (auto flag : row) failed_cells += flag;

    std::string text;
    text += "# table=grid-surface-v1\n";
    text += "# seed=" + std::to_string(args.seed) + "\n";
    text += "# folds=" + std::to_string(args.folds) + "\n";
    text += "# store_fingerprint=" + data.store.fingerprint + "\n";
    text += "# best_gamma=" + format_double(result.best.gamma) + "\n";
    text += "# best_c=" + format_double(result.best.c) + "\n";
    text += "# best_accuracy=" + format_double(result.best_accuracy) + "\n";
    text += "# failed_cells=" + std::to_string(failed_cells) + "\n";
    text += "c\\gamma," + join_numbers(result.gamma_values, ",") + "\n";
    for (std::size_t ci = 0; ci < result.c_values.size(); ++ci) {
        text += format_double(result.c_values[ci]);
        for (std::size_t gi = 0; gi < result.gamma_values.size(); ++gi) {
            text += "," + (result.failed[ci][gi] ? std::string("failed")
                                                 : format_double(result.surface[ci][gi]));
        }
        text += "\n";
    }
    write_file_text(args.out_path, text);

    std::cout << "best_gamma=" << format_double(result.best.gamma) << "\n";
    std::cout << "best_c=" << format_double(result.best.c) << "\n";
    std::cout << "best_accuracy=" << format_double(result.best_accuracy) << "\n";
    std::cout << "failed_cells=" << failed_cells << "\n";
    if (failed_cells > 0) {
        std::cerr << "warning: " << failed_cells << " grid cell(s) failed and scored 0\n";
    }
    const std::size_t total = result.gamma_values.size() * result.c_values.size();
    return failed_cells < total ? 0 : 1;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
    std::string store_path;
    std::string algo;
    std::string out_path;
    std::size_t k = 1;
    std::string distance = "manhattan";
    double gamma = 0.00167;
    double c = 3.0;
    double kkt_tol = 1e-3;
    std::size_t max_passes = 200;
    double test_fraction = 0.25;
    std::size_t trials = 20;
    std::uint64_t seed = kDefaultSeed;
};

int run_evaluate(const EvaluateArgs& args) {
    const StoreData data = load_store_data(args.store_path);
    SplitSpec split;
    split.test_fraction = args.test_fraction;
    split.seed = args.seed;

    EvalReport report;
    std::string param_header;
    if (args.algo == "knn") {
        KnnConfig config{args.k, distance_from_string(args.distance)};
        auto trainer = [config](const std::vector<std::vector<double>>& tx,
                                const std::vector<std::string>& ty) {
            KnnModel model = knn_fit(tx, ty, config);
            return [model = std::move(model)](const std::vector<double>& q) {
                return knn_predict(model, q).first;
            };
        };
        report = repeat_trials(data.x, data.y, args.trials, split, trainer);
        param_header = "# k=" + std::to_string(config.k) +
                       "\n# distance=" + std::string(to_string(config.distance)) + "\n";
    } else if (args.algo == "svm") {
        SvmHyperparams params{args.gamma, args.c};
        params.validate();
        SolverConfig solver;
        solver.kkt_tol = args.kkt_tol;
        solver.max_passes = args.max_passes;
        auto trainer = [params, solver](const std::vector<std::vector<double>>& tx,
                                        const std::vector<std::string>& ty) {
            MulticlassSvm model = ovo_fit(tx, ty, params, solver);
            return [model = std::move(model)](const std::vector<double>& q) {
                return ovo_predict(model, q).first;
            };
        };
        report = repeat_trials(data.x, data.y, args.trials, split, trainer);
        param_header = "# gamma=" + format_double(params.gamma) +
                       "\n# c=" + format_double(params.c) + "\n";
    } else {
        throw Error("unknown algorithm '" + args.algo + "'");
    }

    // Report file: deterministic for a fixed seed; wall-clock means go to
    // standard output only.
    std::string text;
    text += "# report=evaluate-v1\n";
    text += "# seed=" + std::to_string(args.seed) + "\n";
    text += "# algo=" + args.algo + "\n";
    text += param_header;
    text += "# trials=" + std::to_string(args.trials) + "\n";
    text += "# test_fraction=" + format_double(args.test_fraction) + "\n";
    text += "# store_fingerprint=" + data.store.fingerprint + "\n";
    text += "accuracy=" + format_double(report.accuracy) + "\n";
    text += "trial_accuracies=" + join_numbers(report.trial_accuracies, ",") + "\n";
    for (std::size_t i = 0; i < report.confusion.class_set.size(); ++i) {
        text += "per_class=" + report.confusion.class_set[i] + ":" +
                format_double(report.per_class_accuracy[i]) + "\n";
    }
    text += "confusion_classes=" + join_strings(report.confusion.class_set, ",") + "\n";
    for (std::size_t i = 0; i < report.confusion.class_set.size(); ++i) {
        text += "confusion_row=" + report.confusion.class_set[i];
        for (std::size_t j = 0; j < report.confusion.class_set.size(); ++j) {
            text += "," + std::to_string(report.confusion.counts[i][j]);
        }
        text += "\n";
    }
    write_file_text(args.out_path, text);

    char buf[64];
    std::cout << "seed=" << args.seed << "\n";
    std::cout << "trials=" << args.trials << "\n";
    std::cout << "accuracy=" << format_double(report.accuracy) << "\n";
    for (std::size_t i = 0; i < report.confusion.class_set.size(); ++i) {
        std::cout << "per_class " << report.confusion.class_set[i] << "="
                  << format_double(report.per_class_accuracy[i]) << "\n";
    }
    std::snprintf(buf, sizeof buf, "mean_train_seconds=%.6f\n", report.train_seconds);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "mean_test_seconds=%.6f\n", report.test_seconds);
    std::cout << buf;
    print_confusion(std::cout, report.confusion);
    return 0;
}

// ---- predict ----------------------------------------------------------------

struct PredictArgs {
    std::string model_path;
    std::string wav_path;
};

int run_predict(const PredictArgs& args) {
    const SavedModel saved = load_model(args.model_path);

    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a(saved.feature_config)));
    if (saved.feature_fingerprint != digest) {
        std::cerr << "error: fingerprint mismatch: model claims " << saved.feature_fingerprint
                  << " but its embedded feature config hashes to " << digest << "\n";
        return 1;
    }

    Aggregation agg = Aggregation::Mean;
    int sample_rate = kCanonicalRate;
    const MfccConfig config = config_from_string(saved.feature_config, &agg, &sample_rate);
    const std::size_t expect_dim = agg == Aggregation::MeanStd
                                       ? static_cast<std::size_t>(config.dims()) * 2
                                       : static_cast<std::size_t>(config.dims());
    const std::size_t model_dim =
        saved.algo == "knn" ? saved.knn.scaler.mean.size() : saved.svm.scaler.mean.size();
    if (model_dim != expect_dim) {
        std::cerr << "error: model dimension " << model_dim << " does not match dimension "
                  << expect_dim << " of feature config with fingerprint "
                  << saved.feature_fingerprint << "\n";
        return 1;
    }

    AudioClip clip = decode_wav(read_file_bytes(args.wav_path), args.wav_path);
    clip = resample(clip, sample_rate);
    const std::vector<double> q = aggregate(extract_mfcc(clip, config), agg);

    std::cout << "fingerprint=" << saved.feature_fingerprint << "\n";
    std::cout << "algo=" << saved.algo << "\n";
    if (saved.algo == "knn") {
        const auto [label, neighbors] = knn_predict(saved.knn, q);
        std::cout << "label=" << label << "\n";
        for (const auto& nb : neighbors) {
            std::cout << "neighbor=" << nb.label << "," << format_double(nb.dist) << "\n";
        }
    } else {
        const auto [label, votes] = ovo_predict(saved.svm, q);
        std::cout << "label=" << label << "\n";
        for (std::size_t i = 0; i < votes.size(); ++i) {
            std::cout << "votes=" << saved.svm.class_set[i] << "," << votes[i] << "\n";
        }
    }
    return 0;
}

// ---- benchmark ---------------------------------------------------------------

struct BenchmarkArgs {
    std::string store_path;
    std::string algo;
    std::string out_path;
    std::vector<std::size_t> ks{1, 5, 10, 100};
    std::vector<std::string> distances{"euclidean", "manhattan", "chebyshev"};
    std::vector<double> gammas{0.00167};
    std::vector<double> cs{3.0};
    double test_fraction = 0.25;
    std::uint64_t seed = kDefaultSeed;
};

int run_benchmark(const BenchmarkArgs& args) {
    const StoreData data = load_store_data(args.store_path);
    SplitSpec split;
    split.test_fraction = args.test_fraction;
    split.seed = args.seed;
    const auto [train_idx, test_idx] = stratified_split(data.y, split);

    std::vector<std::vector<double>> train_x;
    std::vector<std::string> train_y;
    for (std::size_t i : train_idx) {
        train_x.push_back(data.x[i]);
        train_y.push_back(data.y[i]);
    }

    std::string text;
    text += "# table=benchmark-v1\n";
    text += "# seed=" + std::to_string(args.seed) + "\n";
    text += "# store_fingerprint=" + data.store.fingerprint + "\n";
    text += "# train_rows=" + std::to_string(train_idx.size()) + "\n";
    text += "# test_rows=" + std::to_string(test_idx.size()) + "\n";
    text += "algo,params,train_seconds,test_seconds,accuracy\n";

    auto time_combo = [&](const std::string& params_desc, auto&& fit, auto&& predict_one) {
        char buf[256];
        try {
            auto [model, fit_sec] = timed(fit);
            std::size_t correct = 0;
            auto [unused, predict_sec] = timed([&] {
                for (std::size_t i : test_idx) {
                    if (predict_one(model, data.x[i]) == data.y[i]) ++correct;
                }
                return 0;
            });
            (void)unused;
            const double acc =
                static_cast<double>(correct) / static_cast<double>(test_idx.size());
            std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%s\n", args.algo.c_str(),
                          params_desc.c_str(), fit_sec, predict_sec,
                          format_double(acc).c_str());
            text += buf;
        } catch (const std::exception& e) {
            text += args.algo + "," + params_desc + ",error,error," + e.what() + "\n";
        }
    };

    if (args.algo == "knn") {
        for (std::size_t k : args.ks) {
            for (const auto& distance : args.distances) {
                KnnConfig config{k, distance_from_string(distance)};
                time_combo("k=" + std::to_string(k) + " distance=" + distance,
                           [&] { return knn_fit(train_x, train_y, config); },
                           [](const KnnModel& m, const std::vector<double>& q) {
                               return knn_predict(m, q).first;
                           });
            }
        }
    } else if (args.algo == "svm") {
        for (double gamma : args.gammas) {
            for (double c : args.cs) {
                SvmHyperparams params{gamma, c};
                params.validate();
                time_combo("gamma=" + format_double(gamma) + " c=" + format_double(c),
                           [&] { return ovo_fit(train_x, train_y, params); },
                           [](const MulticlassSvm& m, const std::vector<double>& q) {
                               return ovo_predict(m, q).first;
                           });
            }
        }
    } else {
        throw Error("unknown algorithm '" + args.algo + "'");
    }

    std::cout << text;
    if (!args.out_path.empty()) write_file_text(args.out_path, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"environmental noise classification toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate the synthetic 8-class demo corpus");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--seed", synth_args.seed, "generator seed");
    synth->add_option("--clips", synth_args.clips, "clips per class")
        ->check(CLI::PositiveNumber);
    synth->add_option("--seconds", synth_args.seconds, "clip length in seconds")
        ->check(CLI::PositiveNumber);

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "extract features for a manifest of clips");
    extract->add_option("--manifest", extract_args.manifest_path, "manifest file")->required();
    extract->add_option("--out", extract_args.out_path, "feature store to write")->required();
    extract->add_option("--jobs", extract_args.jobs, "worker threads (0 = all cores)");
    extract->add_option("--aggregate", extract_args.aggregate, "mean or mean_std")
        ->check(CLI::IsMember({"mean", "mean_std"}));
    extract->add_option("--frame-len", extract_args.config.frame_len, "frame length (power of 2)");
    extract->add_option("--hop-len", extract_args.config.hop_len, "hop length");
    extract->add_option("--n-mels", extract_args.config.n_mels, "mel filter count");
    extract->add_option("--n-coeffs", extract_args.config.n_coeffs, "cepstral coefficient count");
    extract->add_option("--fmin", extract_args.config.fmin, "filterbank low edge in Hz");
    extract->add_option("--fmax", extract_args.config.fmax, "filterbank high edge in Hz");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "train a model from a feature store");
    train->add_option("--store", train_args.store_path, "feature store")->required();
    train->add_option("--algo", train_args.algo, "knn or svm")
        ->required()
        ->check(CLI::IsMember({"knn", "svm"}));
    train->add_option("--out", train_args.out_path, "model file to write")->required();
    train->add_option("--k", train_args.k, "neighbor count")->check(CLI::PositiveNumber);
    train->add_option("--distance", train_args.distance, "euclidean, manhattan or chebyshev")
        ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
    train->add_option("--gamma", train_args.gamma, "RBF gamma")->check(CLI::PositiveNumber);
    train->add_option("--c", train_args.c, "soft-margin C")->check(CLI::PositiveNumber);
    train->add_option("--kkt-tol", train_args.kkt_tol, "solver KKT tolerance")
        ->check(CLI::PositiveNumber);
    train->add_option("--max-passes", train_args.max_passes, "solver full-pass limit")
        ->check(CLI::PositiveNumber);

    GridArgs grid_args;
    auto* grid = app.add_subcommand("grid-search", "cross-validated (gamma, C) grid search");
    grid->add_option("--store", grid_args.store_path, "feature store")->required();
    grid->add_option("--out", grid_args.out_path, "surface table to write")->required();
    grid->add_option("--gamma", grid_args.gammas, "gamma axis values")
        ->required()
        ->delimiter(',');
    grid->add_option("--c", grid_args.cs, "C axis values")->required()->delimiter(',');
    grid->add_option("--folds", grid_args.folds, "cross-validation folds")
        ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1000)));
    grid->add_option("--seed", grid_args.seed, "fold-assignment seed");
    grid->add_option("--jobs", grid_args.jobs, "worker threads (0 = all cores)");
    grid->add_option("--kkt-tol", grid_args.kkt_tol, "solver KKT tolerance")
        ->check(CLI::PositiveNumber);
    grid->add_option("--max-passes", grid_args.max_passes, "solver full-pass limit")
        ->check(CLI::PositiveNumber);

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "repeated split/train/test protocol");
    evaluate->add_option("--store", eval_args.store_path, "feature store")->required();
    evaluate->add_option("--algo", eval_args.algo, "knn or svm")
        ->required()
        ->check(CLI::IsMember({"knn", "svm"}));
    evaluate->add_option("--out", eval_args.out_path, "report file to write")->required();
    evaluate->add_option("--k", eval_args.k, "neighbor count")->check(CLI::PositiveNumber);
    evaluate->add_option("--distance", eval_args.distance, "euclidean, manhattan or chebyshev")
        ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
    evaluate->add_option("--gamma", eval_args.gamma, "RBF gamma")->check(CLI::PositiveNumber);
    evaluate->add_option("--c", eval_args.c, "soft-margin C")->check(CLI::PositiveNumber);
    evaluate->add_option("--kkt-tol", eval_args.kkt_tol, "solver KKT tolerance")
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--max-passes", eval_args.max_passes, "solver full-pass limit")
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--test-fraction", eval_args.test_fraction, "held-out fraction");
    evaluate->add_option("--trials", eval_args.trials, "number of repeated splits")
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--seed", eval_args.seed, "base split seed");

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "classify one WAV clip with a saved model");
    predict->add_option("--model", predict_args.model_path, "model file")->required();
    predict->add_option("wav", predict_args.wav_path, "audio clip to classify")->required();

    BenchmarkArgs bench_args;
    auto* benchmark =
        app.add_subcommand("benchmark", "time fit/predict on precomputed features only");
    benchmark->add_option("--store", bench_args.store_path, "feature store")->required();
    benchmark->add_option("--algo", bench_args.algo, "knn or svm")
        ->required()
        ->check(CLI::IsMember({"knn", "svm"}));
    benchmark->add_option("--out", bench_args.out_path, "timing table to write (optional)");
    benchmark->add_option("--k", bench_args.ks, "k values")->delimiter(',');
    benchmark->add_option("--distance", bench_args.distances, "distance kinds")->delimiter(',');
    benchmark->add_option("--gamma", bench_args.gammas, "gamma values")->delimiter(',');
    benchmark->add_option("--c", bench_args.cs, "C values")->delimiter(',');
    benchmark->add_option("--test-fraction", bench_args.test_fraction, "held-out fraction");
    benchmark->add_option("--seed", bench_args.seed, "split seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return run_synth(synth_args);
        if (*extract) return run_extract(extract_args);
        if (*train) return run_train(train_args);
        if (*grid) return run_grid_search(grid_args);
        if (*evaluate) return run_evaluate(eval_args);
        if (*predict) return run_predict(predict_args);
        if (*benchmark) return run_benchmark(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
