#include "utb/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "utb/error.hpp"
#include "utb/rng.hpp"

namespace utb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBaseLevel = 0.48;  // control response level of the binary generator
constexpr double kBaseAmp = 0.10;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Interaction signal driving the effect; uses up to the first five features.
double effect_signal(const double* x, int p) {
    double raw = 0.0;
    if (p >= 2)
        raw += 3.0 * (x[0] * x[1] - 0.25);
    else
        raw += 3.0 * (x[0] - 0.5);
    if (p >= 3) raw += 2.0 * (x[2] - 0.5);
    if (p >= 5) raw += 1.5 * (x[3] * x[4] - 0.25);
    return raw;
}

// Zero-mean smooth baseline shape on the first three features, range ~[-0.9, 1.0].
double baseline_shape(const double* x, int p) {
    double g = std::sin(kTwoPi * x[0]);
    if (p >= 2) g += 2.0 * (x[1] - 0.5);
    if (p >= 3) g += x[2] * x[2] - 1.0 / 3.0;
    return g / 2.667;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n < 1) fail(ErrorKind::Config, "synthetic n must be positive");
    if (p < 1) fail(ErrorKind::Config, "synthetic p must be positive");
    if (!(treatment_ratio > 0.0 && treatment_ratio < 1.0))
        fail(ErrorKind::Config, "treatment_ratio must lie in (0,1)");
    if (!(effect_strength >= 0.0)) fail(ErrorKind::Config, "effect_strength must be >= 0");
    if (!(noise_sd >= 0.0)) fail(ErrorKind::Config, "noise_sd must be >= 0");
}

SyntheticSpec SyntheticSpec::binary_benchmark(int64_t n, int p, uint64_t seed) {
    SyntheticSpec s;
    s.n = n;
    s.p = p;
    s.treatment_ratio = 0.5;
    s.effect_strength = 0.50;
    s.outcome_kind = OutcomeKind::binary;
    s.seed = seed;
    return s;
}

UpliftDataset synthesize(const SyntheticSpec& spec) {
    spec.validate();

    UpliftDataset data;
    data.n = spec.n;
    data.p = spec.p;
    data.num_arms = 1;
    data.features.resize(spec.n * static_cast<int64_t>(spec.p));
    data.outcome.resize(spec.n);
    data.treatment.resize(spec.n);
    data.true_effect.resize(spec.n);
    data.feature_names.reserve(spec.p);
    for (int f = 1; f <= spec.p; ++f) data.feature_names.push_back("f" + std::to_string(f));

    Rng feat_rng = Rng::stream(spec.seed, "synth.features");
    for (auto& v : data.features) v = feat_rng.uniform01();

    Rng treat_rng = Rng::stream(spec.seed, "synth.treatment");
    for (int64_t i = 0; i < spec.n; ++i)
        data.treatment[i] = treat_rng.bernoulli(spec.treatment_ratio) ? 1 : 0;

    Rng out_rng = Rng::stream(spec.seed, "synth.outcome");
    const bool binary = spec.outcome_kind == OutcomeKind::binary;
    for (int64_t i = 0; i < spec.n; ++i) {
        const double* x = data.features.data() + i * spec.p;
        const double tau_raw =
            spec.effect_strength == 0.0 ? 0.0
                                        : spec.effect_strength * sigmoid(2.0 * effect_signal(x, spec.p));
        if (binary) {
            const double p0 = std::clamp(kBaseLevel + kBaseAmp * baseline_shape(x, spec.p), 0.001, 0.999);
            const double p1 = std::clamp(p0 + tau_raw, 0.001, 0.999);
            const double tau = p1 - p0;
            data.true_effect[i] = tau;
            const double prob = data.treatment[i] == 1 ? p1 : p0;
            data.outcome[i] = out_rng.bernoulli(prob) ? 1.0 : 0.0;
        } else {
            const double base = baseline_shape(x, spec.p);
            data.true_effect[i] = tau_raw;
            data.outcome[i] = base + (data.treatment[i] == 1 ? tau_raw : 0.0) +
                              (spec.noise_sd > 0.0 ? spec.noise_sd * out_rng.normal() : 0.0);
        }
    }

    data.validate();
    return data;
}

}  // namespace utb
