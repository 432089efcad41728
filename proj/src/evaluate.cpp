#include "utb/evaluate.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "utb/error.hpp"
#include "utb/rng.hpp"

namespace utb {

namespace {

MatrixView view_of(const UpliftDataset& data) { return {data.features.data(), data.n, data.p}; }

double qini_of(const BoosterModel& model, const UpliftDataset& data) {
    const auto scores = uplift_scores(model, view_of(data));
    const QiniCurve curve = evaluate_qini(scores, data.outcome, data.treatment);
    return curve.coefficient ? *curve.coefficient : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

BoosterModel fit_any(const UpliftDataset& data, const AnyBoosterConfig& cfg, int num_threads) {
    if (std::holds_alternative<TddpConfig>(cfg))
        return fit_tddp(data, std::get<TddpConfig>(cfg), num_threads);
    return fit_causalgbm(data, std::get<CausalConfig>(cfg), num_threads);
}

std::vector<double> uplift_scores(const BoosterModel& model, const MatrixView& rows) {
    if (model.kind == BoosterKind::tddp) return predict_tddp(model, rows);
    std::vector<double> effects = predict_effect(model, rows, EffectScale::margin);
    if (model.num_arms == 1) return effects;
    std::vector<double> first(rows.n);
    for (int64_t i = 0; i < rows.n; ++i) first[i] = effects[i * model.num_arms];
    return first;
}

CrossValidationReport cross_validate(const UpliftDataset& data, const AnyBoosterConfig& cfg,
                                     int k, uint64_t seed, int num_threads) {
    data.validate();
    if (data.num_arms != 1)
        fail(ErrorKind::Unsupported, "cross-validated Qini requires binary treatment");

    const FoldPlan plan = split_folds(data, k, seed);
    CrossValidationReport report;
    report.warning = plan.warning;

    for (int f = 0; f < k; ++f) {
        try {
            const UpliftDataset train = data.subset(plan.folds[f].train);
            const UpliftDataset test = data.subset(plan.folds[f].test);
            const BoosterModel model = fit_any(train, cfg, num_threads);
            const auto scores = uplift_scores(model, view_of(test));
            const QiniCurve curve = evaluate_qini(scores, test.outcome, test.treatment);
            if (!curve.coefficient)
                fail(ErrorKind::Validation, "degenerate Qini normalization on the test split");
            report.fold_coefficients.push_back(*curve.coefficient);
        } catch (const Error& e) {
            fail(e.kind(), "fold " + std::to_string(f) + ": " + e.what());
        }
    }

    const double k_real = static_cast<double>(k);
    report.mean = std::accumulate(report.fold_coefficients.begin(), report.fold_coefficients.end(),
                                  0.0) /
                  k_real;
    double ss = 0.0;
    for (const double c : report.fold_coefficients) ss += (c - report.mean) * (c - report.mean);
    report.std_error = std::sqrt(ss / (k_real - 1.0)) / std::sqrt(k_real);
    return report;
}

std::vector<AblationRow> ablate_ensembles(const std::vector<SyntheticSpec>& specs,
                                          const AblationOptions& opts) {
    std::vector<AblationRow> rows;
    for (const auto& spec : specs) {
        const UpliftDataset data = synthesize(spec);

        std::vector<uint32_t> order(data.n);
        std::iota(order.begin(), order.end(), 0u);
        Rng rng = Rng::stream(opts.seed, "ablate.split", spec.p);
        for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        const int64_t half = data.n / 2;
        const UpliftDataset train = data.subset({order.data(), static_cast<size_t>(half)});
        const UpliftDataset test =
            data.subset({order.data() + half, static_cast<size_t>(data.n - half)});

        for (const char* method : {"tddp", "causalgbm"}) {
            for (const EnsembleMode mode : {EnsembleMode::boosting, EnsembleMode::bagging}) {
                AnyBoosterConfig cfg;
                if (std::string(method) == "tddp") {
                    TddpConfig c = opts.tddp;
                    c.ensemble_mode = mode;
                    cfg = c;
                } else {
                    CausalConfig c = opts.causal;
                    c.ensemble_mode = mode;
                    cfg = c;
                }
                const BoosterModel model = fit_any(train, cfg, opts.num_threads);
                rows.push_back({method, to_string(mode), spec.p, qini_of(model, train),
                                qini_of(model, test)});
            }
        }
    }
    return rows;
}

}  // namespace utb
