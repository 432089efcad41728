// utb: command-line front end for the uplift tree boosting engine.
//
// Subcommands: train, predict, eval, cv, synth, ablate, summary.
// Exit codes: 0 success, 1 runtime failure, 2 usage/configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "utb/causalgbm.hpp"
#include "utb/csv.hpp"
#include "utb/dataset.hpp"
#include "utb/error.hpp"
#include "utb/evaluate.hpp"
#include "utb/model_io.hpp"
#include "utb/synthetic.hpp"
#include "utb/tddp.hpp"

namespace {

using namespace utb;

struct TrainFlags {
    std::string booster = "tddp";
    std::string data_path;
    std::string outcome_col = "y";
    std::string treatment_col = "w";
    std::string loss = "squared";
    std::string mode = "boosting";
    int trees = 100;
    double shrinkage = 0.1;
    int max_leaves = 31;
    int max_depth = 0;
    int min_samples_leaf = 20;
    int min_samples_arm = 5;
    double min_gain = 0.0;
    double lambda = 0.0;
    int max_bins = 255;
    uint64_t seed = 0;
};

void add_train_options(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--booster", f.booster, "tddp or causalgbm")
        ->check(CLI::IsMember({"tddp", "causalgbm"}));
    cmd->add_option("--data", f.data_path, "training CSV")->required();
    cmd->add_option("--outcome", f.outcome_col, "outcome column name");
    cmd->add_option("--treatment", f.treatment_col, "treatment column name");
    cmd->add_option("--trees", f.trees, "boosting rounds");
    cmd->add_option("--shrinkage", f.shrinkage, "learning rate in (0,1]");
    cmd->add_option("--max-leaves,--max_leaves", f.max_leaves, "leaves per tree");
    cmd->add_option("--max-depth,--max_depth", f.max_depth, "0 = unlimited");
    cmd->add_option("--min-samples-leaf,--min_samples_leaf", f.min_samples_leaf,
                    "minimum rows per leaf");
    cmd->add_option("--min-samples-arm,--min_samples_arm", f.min_samples_arm,
                    "minimum rows per treatment arm per leaf");
    cmd->add_option("--min-gain,--min_gain", f.min_gain, "minimum split gain");
    cmd->add_option("--lambda", f.lambda, "L2 on leaf weights");
    cmd->add_option("--max-bins,--max_bins", f.max_bins, "histogram bins per feature");
    cmd->add_option("--loss", f.loss, "causalgbm loss")
        ->check(CLI::IsMember({"squared", "logistic"}));
    cmd->add_option("--mode", f.mode, "ensemble mode")
        ->check(CLI::IsMember({"boosting", "bagging"}));
    cmd->add_option("--seed", f.seed, "root seed for all randomness");
}

GrowthConfig growth_of(const TrainFlags& f) {
    GrowthConfig g;
    g.max_leaves = f.max_leaves;
    g.max_depth = f.max_depth;
    g.min_samples_leaf = f.min_samples_leaf;
    g.min_samples_per_arm_leaf = f.min_samples_arm;
    g.min_gain = f.min_gain;
    g.lambda = f.lambda;
    return g;
}

AnyBoosterConfig config_of(const TrainFlags& f) {
    if (f.booster == "tddp") {
        TddpConfig cfg;
        cfg.num_trees = f.trees;
        cfg.shrinkage = f.shrinkage;
        cfg.growth = growth_of(f);
        cfg.ensemble_mode = ensemble_mode_from(f.mode);
        cfg.max_bins = f.max_bins;
        cfg.seed = f.seed;
        return cfg;
    }
    CausalConfig cfg;
    cfg.num_trees = f.trees;
    cfg.shrinkage = f.shrinkage;
    cfg.loss = loss_kind_from(f.loss);
    cfg.growth = growth_of(f);
    cfg.ensemble_mode = ensemble_mode_from(f.mode);
    cfg.max_bins = f.max_bins;
    cfg.seed = f.seed;
    return cfg;
}

UpliftDataset load_data(const TrainFlags& f) {
    return load_csv(f.data_path, f.outcome_col, f.treatment_col);
}

// Reads the model's feature columns (matched by name) out of an arbitrary CSV.
std::vector<double> feature_matrix(const std::string& path, const BoosterModel& model,
                                   int64_t& n_out) {
    const auto header = read_csv_header(path);
    int found = 0;
    for (const auto& name : model.feature_names)
        for (const auto& col : header)
            if (col == name) {
                ++found;
                break;
            }
    if (found != model.feature_count())
        fail(ErrorKind::Shape, "feature mismatch: model expects " +
                                   std::to_string(model.feature_count()) +
                                   " named feature columns, found " + std::to_string(found));
    const auto table = read_csv_columns(path, model.feature_names);
    n_out = table.rows;
    std::vector<double> matrix(table.rows * static_cast<int64_t>(model.feature_count()));
    for (int f = 0; f < model.feature_count(); ++f)
        for (int64_t i = 0; i < table.rows; ++i)
            matrix[i * model.feature_count() + f] = table.columns[f][i];
    return matrix;
}

int cmd_train(const TrainFlags& f, const std::string& out_path, bool verbose, int threads) {
    const auto data = load_data(f);
    const auto cfg = config_of(f);
    BoosterModel model;
    std::vector<double> diag;
    if (std::holds_alternative<TddpConfig>(cfg)) {
        model = fit_tddp(data, std::get<TddpConfig>(cfg), threads, verbose ? &diag : nullptr);
        if (verbose)
            for (size_t i = 0; i < diag.size(); ++i)
                std::printf("iter %zu: transformed-label variance %.6g\n", i + 1, diag[i]);
    } else {
        model = fit_causalgbm(data, std::get<CausalConfig>(cfg), threads, verbose ? &diag : nullptr);
        if (verbose)
            for (size_t i = 1; i < diag.size(); ++i)
                std::printf("iter %zu: training loss %.6g\n", i, diag[i]);
    }
    save_model(model, out_path);
    std::printf("trained %s (%s) with %zu trees on %lld rows; model written to %s\n",
                to_string(model.kind), to_string(model.mode), model.trees.size(),
                static_cast<long long>(data.n), out_path.c_str());
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, const std::string& output, int arm,
                const std::string& scale_name) {
    const auto model = load_model(model_path);
    int64_t n = 0;
    const auto matrix = feature_matrix(data_path, model, n);
    const MatrixView rows{matrix.data(), n, model.feature_count()};
    const EffectScale scale =
        scale_name == "probability" ? EffectScale::probability : EffectScale::margin;
    const std::string prefix = scale == EffectScale::probability ? "prob_" : "";

    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    if (model.kind == BoosterKind::tddp) {
        if (output == "outcome")
            fail(ErrorKind::Config, "tddp estimates effects only; use --output effect");
        header.push_back("effect");
        columns.push_back(predict_tddp(model, rows));
    } else if (output == "effect") {
        const auto effects = predict_effect(model, rows, scale);
        for (int a = 1; a <= model.num_arms; ++a) {
            header.push_back(prefix + "effect_" + std::to_string(a));
            std::vector<double> col(n);
            for (int64_t i = 0; i < n; ++i) col[i] = effects[i * model.num_arms + (a - 1)];
            columns.push_back(std::move(col));
        }
    } else {
        if (arm < 0 || arm > model.num_arms)
            fail(ErrorKind::Config, "arm " + std::to_string(arm) + " outside {0.." +
                                        std::to_string(model.num_arms) + "}");
        header.push_back(prefix + "outcome_" + std::to_string(arm));
        columns.push_back(predict_outcome(model, rows, arm, scale));
    }

    std::vector<const std::vector<double>*> ptrs;
    for (const auto& c : columns) ptrs.push_back(&c);
    write_csv(out_path, header, ptrs);
    std::printf("wrote %lld predictions to %s\n", static_cast<long long>(n), out_path.c_str());
    return 0;
}

int cmd_eval(const std::string& scores_path, const std::string& score_col, const TrainFlags& f,
             const std::string& curve_out) {
    const auto data = load_data(f);
    CsvColumns scores_table;
    if (score_col.empty()) {
        scores_table = read_csv_columns(scores_path);
        if (scores_table.header.empty()) fail(ErrorKind::Parse, "scores file has no columns");
        scores_table.header.resize(1);
        scores_table.columns.resize(1);
    } else {
        scores_table = read_csv_columns(scores_path, {score_col});
    }
    if (scores_table.rows != data.n)
        fail(ErrorKind::Shape, "scores row count " + std::to_string(scores_table.rows) +
                                   " does not match data row count " + std::to_string(data.n));

    const auto curve = evaluate_qini(scores_table.columns[0], data.outcome, data.treatment);
    std::printf("rows: %lld\n", static_cast<long long>(data.n));
    std::printf("overall incremental gain: %s\n", format_double(curve.overall_gain).c_str());
    std::printf("auq: %s\n", format_double(curve.auq).c_str());
    if (curve.coefficient)
        std::printf("qini_coefficient: %s\n", format_double(*curve.coefficient).c_str());
    else
        std::printf("qini_coefficient: undefined\n");

    if (!curve_out.empty()) {
        std::vector<double> fraction, gain;
        for (const auto& pt : curve.points) {
            fraction.push_back(pt.fraction);
            gain.push_back(pt.incremental_gain);
        }
        write_csv(curve_out, {"fraction", "gain"}, {&fraction, &gain});
    }
    return 0;
}

int cmd_cv(const TrainFlags& f, int folds, const std::string& out_path, int threads) {
    const auto data = load_data(f);
    const auto report = cross_validate(data, config_of(f), folds, f.seed, threads);
    if (!report.warning.empty()) std::fprintf(stderr, "warning: %s\n", report.warning.c_str());
    for (size_t i = 0; i < report.fold_coefficients.size(); ++i)
        std::printf("fold %zu: %.6f\n", i, report.fold_coefficients[i]);
    std::printf("qini_coefficient: %.6f +- %.6f (mean +- s.e., %d folds)\n", report.mean,
                report.std_error, folds);
    if (!out_path.empty()) {
        std::vector<double> idx, coef;
        for (size_t i = 0; i < report.fold_coefficients.size(); ++i) {
            idx.push_back(static_cast<double>(i));
            coef.push_back(report.fold_coefficients[i]);
        }
        write_csv(out_path, {"fold", "coefficient"}, {&idx, &coef});
    }
    return 0;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_path, bool with_truth) {
    const auto data = synthesize(spec);

    std::vector<std::string> header = data.feature_names;
    header.push_back("y");
    header.push_back("w");
    std::vector<std::vector<double>> cols(data.p);
    for (int f = 0; f < data.p; ++f) {
        cols[f].resize(data.n);
        for (int64_t i = 0; i < data.n; ++i) cols[f][i] = data.at(i, f);
    }
    std::vector<double> w_col(data.n);
    for (int64_t i = 0; i < data.n; ++i) w_col[i] = data.treatment[i];

    std::vector<const std::vector<double>*> ptrs;
    for (const auto& c : cols) ptrs.push_back(&c);
    ptrs.push_back(&data.outcome);
    ptrs.push_back(&w_col);
    if (with_truth) {
        header.push_back("__true_effect_1");
        ptrs.push_back(&data.true_effect);
    }
    write_csv(out_path, header, ptrs);
    std::printf("wrote %lld synthetic rows to %s\n", static_cast<long long>(data.n),
                out_path.c_str());
    return 0;
}

int cmd_ablate(const std::vector<int>& dims, int64_t n, const TrainFlags& f,
               const std::string& out_path, int threads) {
    std::vector<SyntheticSpec> specs;
    for (const int p : dims) specs.push_back(SyntheticSpec::binary_benchmark(n, p, f.seed));

    TrainFlags tddp_flags = f;
    tddp_flags.booster = "tddp";
    TrainFlags causal_flags = f;
    causal_flags.booster = "causalgbm";
    AblationOptions opts;
    opts.tddp = std::get<TddpConfig>(config_of(tddp_flags));
    opts.causal = std::get<CausalConfig>(config_of(causal_flags));
    opts.seed = f.seed;
    opts.num_threads = threads;

    const auto rows = ablate_ensembles(specs, opts);
    std::printf("%-10s %-9s %9s %12s %12s\n", "method", "mode", "features", "train_qini",
                "test_qini");
    for (const auto& r : rows)
        std::printf("%-10s %-9s %9d %12.6f %12.6f\n", r.method.c_str(), r.mode.c_str(),
                    r.features, r.train_qini, r.test_qini);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) fail(ErrorKind::Io, "cannot write '" + out_path + "'");
        out << "method,mode,features,train_qini,test_qini\n";
        for (const auto& r : rows)
            out << r.method << ',' << r.mode << ',' << r.features << ','
                << format_double(r.train_qini) << ',' << format_double(r.test_qini) << '\n';
        if (!out) fail(ErrorKind::Io, "write failed for '" + out_path + "'");
    }
    return 0;
}

int cmd_summary(const TrainFlags& f) {
    const auto s = summarize(load_data(f));
    std::printf("Size:            %lld\n", static_cast<long long>(s.size));
    std::printf("Features:        %d\n", s.features);
    std::printf("Avg. Label:      %.4f\n", s.avg_label);
    std::printf("Treatment Ratio: %.4f\n", s.treatment_ratio);
    if (s.relative_uplift_pct)
        std::printf("Relative Uplift: %.1f%%\n", *s.relative_uplift_pct);
    else
        std::printf("Relative Uplift: undefined (control mean is zero)\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uplift tree boosting: train, evaluate, and ship uplift GBDT models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file ([subcommand] sections)");

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto)")->envname("UTB_THREADS");

    TrainFlags train_flags;
    std::string train_out = "model.json";
    bool verbose = false;
    auto* train = app.add_subcommand("train", "fit a booster and save the model");
    add_train_options(train, train_flags);
    train->add_option("--out", train_out, "model file to write");
    train->add_flag("--verbose", verbose, "print per-iteration diagnostics");

    std::string predict_model, predict_data, predict_out = "predictions.csv";
    std::string predict_output = "effect", predict_scale = "margin";
    int predict_arm = 0;
    auto* predict = app.add_subcommand("predict", "score rows with a saved model");
    predict->add_option("--model", predict_model)->required();
    predict->add_option("--data", predict_data)->required();
    predict->add_option("--out", predict_out, "predictions CSV to write");
    predict->add_option("--output", predict_output, "effect or outcome")
        ->check(CLI::IsMember({"effect", "outcome"}));
    predict->add_option("--arm", predict_arm, "arm for --output outcome");
    predict->add_option("--scale", predict_scale, "margin or probability")
        ->check(CLI::IsMember({"margin", "probability"}));

    TrainFlags eval_flags;
    std::string eval_scores, eval_score_col, eval_curve_out;
    auto* eval = app.add_subcommand("eval", "Qini report for precomputed scores");
    eval->add_option("--scores", eval_scores, "CSV of scores")->required();
    eval->add_option("--score-col,--score_col", eval_score_col, "column (default: first)");
    eval->add_option("--data", eval_flags.data_path, "labelled CSV")->required();
    eval->add_option("--outcome", eval_flags.outcome_col);
    eval->add_option("--treatment", eval_flags.treatment_col);
    eval->add_option("--curve-out,--curve_out", eval_curve_out, "write curve points CSV");

    TrainFlags cv_flags;
    int cv_folds = 10;
    std::string cv_out;
    auto* cv = app.add_subcommand("cv", "k-fold cross-validated Qini");
    add_train_options(cv, cv_flags);
    cv->add_option("--folds", cv_folds, "number of folds");
    cv->add_option("--out", cv_out, "per-fold coefficients CSV");

    SyntheticSpec synth_spec;
    synth_spec.n = 10000;
    synth_spec.p = 10;
    synth_spec.effect_strength = 0.5;
    std::string synth_out = "synthetic.csv", synth_kind = "binary";
    bool with_truth = false;
    auto* synth = app.add_subcommand("synth", "generate a synthetic uplift dataset");
    synth->add_option("--n", synth_spec.n, "rows");
    synth->add_option("--p", synth_spec.p, "features");
    synth->add_option("--ratio", synth_spec.treatment_ratio, "treatment probability");
    synth->add_option("--effect-strength,--effect_strength", synth_spec.effect_strength);
    synth->add_option("--noise-sd,--noise_sd", synth_spec.noise_sd);
    synth->add_option("--kind", synth_kind)->check(CLI::IsMember({"binary", "continuous"}));
    synth->add_option("--seed", synth_spec.seed);
    synth->add_option("--out", synth_out, "CSV to write");
    synth->add_flag("--with-truth,--with_truth", with_truth, "append __true_effect_1");

    TrainFlags ablate_flags;
    ablate_flags.trees = 40;
    ablate_flags.shrinkage = 0.1;
    std::vector<int> ablate_dims{5, 20, 50, 100};
    int64_t ablate_n = 20000;
    std::string ablate_out;
    auto* ablate = app.add_subcommand("ablate", "boosting-vs-bagging table over feature counts");
    ablate->add_option("--dims", ablate_dims, "feature counts")->delimiter(',');
    ablate->add_option("--n", ablate_n, "rows per synthetic draw");
    ablate->add_option("--trees", ablate_flags.trees);
    ablate->add_option("--shrinkage", ablate_flags.shrinkage);
    ablate->add_option("--max-leaves,--max_leaves", ablate_flags.max_leaves);
    ablate->add_option("--min-samples-leaf,--min_samples_leaf", ablate_flags.min_samples_leaf);
    ablate->add_option("--loss", ablate_flags.loss)->check(CLI::IsMember({"squared", "logistic"}));
    ablate->add_option("--seed", ablate_flags.seed);
    ablate->add_option("--out", ablate_out, "CSV to write");

    TrainFlags summary_flags;
    auto* summary = app.add_subcommand("summary", "dataset statistics");
    summary->add_option("--data", summary_flags.data_path)->required();
    summary->add_option("--outcome", summary_flags.outcome_col);
    summary->add_option("--treatment", summary_flags.treatment_col);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(train)) return cmd_train(train_flags, train_out, verbose, threads);
        if (app.got_subcommand(predict))
            return cmd_predict(predict_model, predict_data, predict_out, predict_output,
                               predict_arm, predict_scale);
        if (app.got_subcommand(eval))
            return cmd_eval(eval_scores, eval_score_col, eval_flags, eval_curve_out);
        if (app.got_subcommand(cv)) return cmd_cv(cv_flags, cv_folds, cv_out, threads);
        if (app.got_subcommand(synth)) {
            synth_spec.outcome_kind =
                synth_kind == "binary" ? OutcomeKind::binary : OutcomeKind::continuous;
            return cmd_synth(synth_spec, synth_out, with_truth);
        }
        if (app.got_subcommand(ablate))
            return cmd_ablate(ablate_dims, ablate_n, ablate_flags, ablate_out, threads);
        if (app.got_subcommand(summary)) return cmd_summary(summary_flags);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Unsupported ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
