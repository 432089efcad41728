#include "utb/qini.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "utb/error.hpp"

namespace utb {

namespace {

void check_inputs(std::span<const double> scores, std::span<const double> y,
                  std::span<const int> w) {
    if (scores.size() != y.size() || y.size() != w.size())
        fail(ErrorKind::Shape, "scores, outcomes and treatment must have equal length");
    if (scores.empty()) fail(ErrorKind::Validation, "cannot compute a Qini curve on no rows");
    bool has_treated = false, has_control = false;
    for (const int arm : w) {
        if (arm == 0)
            has_control = true;
        else if (arm == 1)
            has_treated = true;
        else
            fail(ErrorKind::Validation, "Qini evaluation requires binary treatment");
    }
    if (!has_treated || !has_control)
        fail(ErrorKind::Validation, "Qini evaluation requires rows in both arms");
}

bool outcomes_are_binary(std::span<const double> y) {
    for (const double v : y)
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

}  // namespace

QiniCurve qini_curve(std::span<const double> scores, std::span<const double> y,
                     std::span<const int> w) {
    check_inputs(scores, y, w);
    const int64_t n = static_cast<int64_t>(scores.size());

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return scores[a] > scores[b]; });

    QiniCurve curve;
    curve.points.push_back({0.0, 0.0});
    double y1 = 0.0, y0 = 0.0, n1 = 0.0, n0 = 0.0;
    int64_t k = 0;
    while (k < n) {
        // Consume one tied-score block.
        const double block_score = scores[order[k]];
        do {
            const uint32_t i = order[k];
            if (w[i] == 1) {
                y1 += y[i];
                n1 += 1.0;
            } else {
                y0 += y[i];
                n0 += 1.0;
            }
            ++k;
        } while (k < n && scores[order[k]] == block_score);
        const double gain = n0 > 0.0 ? y1 - y0 * (n1 / n0) : y1;
        curve.points.push_back({static_cast<double>(k) / static_cast<double>(n), gain});
    }
    curve.overall_gain = curve.points.back().incremental_gain;

    double area = 0.0;
    for (size_t i = 1; i < curve.points.size(); ++i)
        area += (curve.points[i].fraction - curve.points[i - 1].fraction) *
                (curve.points[i].incremental_gain + curve.points[i - 1].incremental_gain) * 0.5;
    curve.auq = area;
    return curve;
}

std::optional<double> qini_coefficient(const QiniCurve& curve, std::span<const double> y,
                                       std::span<const int> w) {
    std::vector<double> perfect(y.size());
    if (outcomes_are_binary(y)) {
        for (size_t i = 0; i < y.size(); ++i)
            perfect[i] = ((w[i] == 1 && y[i] == 1.0) || (w[i] == 0 && y[i] == 0.0)) ? 1.0 : 0.0;
    } else {
        for (size_t i = 0; i < y.size(); ++i) perfect[i] = w[i] == 1 ? y[i] : -y[i];
    }
    const QiniCurve best = qini_curve(perfect, y, w);

    const double random_area = 0.5 * curve.overall_gain;
    const double denom = best.auq - random_area;
    if (denom == 0.0 || !std::isfinite(denom)) return std::nullopt;
    return (curve.auq - random_area) / denom;
}

QiniCurve evaluate_qini(std::span<const double> scores, std::span<const double> y,
                        std::span<const int> w) {
    QiniCurve curve = qini_curve(scores, y, w);
    curve.coefficient = qini_coefficient(curve, y, w);
    return curve;
}

}  // namespace utb
