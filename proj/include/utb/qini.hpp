#pragma once
#include <optional>
#include <span>
#include <vector>

namespace utb {

struct QiniPoint {
    double fraction = 0.0;          // targeted share of the population
    double incremental_gain = 0.0;  // Y1(k) - Y0(k) * N1(k)/N0(k)
};

struct QiniCurve {
    std::vector<QiniPoint> points;  // starts at (0,0), ends at (1, overall gain)
    double auq = 0.0;               // trapezoidal area under the curve
    double overall_gain = 0.0;
    std::optional<double> coefficient;  // filled by qini_coefficient / evaluate_qini
};

// Cumulative incremental-gain curve of a score-ranked population (binary
// treatment). Rows sort by score descending; rows with exactly equal scores
// form one block contributing a single curve point, which spreads the block's
// increment linearly and makes the curve invariant to within-block order.
QiniCurve qini_curve(std::span<const double> scores, std::span<const double> y,
                     std::span<const int> w);

// (AUQ - AUQ_random) / (AUQ_perfect - AUQ_random), where AUQ_random is the
// chord area and the perfect ordering ranks treated responders and control
// non-responders first ({0,1} outcomes), or by outcome (treated descending,
// control ascending) otherwise. Empty when the data cannot separate the
// perfect curve from the chord.
std::optional<double> qini_coefficient(const QiniCurve& curve, std::span<const double> y,
                                       std::span<const int> w);

// Curve plus coefficient in one call.
QiniCurve evaluate_qini(std::span<const double> scores, std::span<const double> y,
                        std::span<const int> w);

}  // namespace utb
