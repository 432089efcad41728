#pragma once
#include <cstdint>

#include "utb/dataset.hpp"

namespace utb {

enum class OutcomeKind { binary, continuous };

struct SyntheticSpec {
    int64_t n = 0;
    int p = 0;
    double treatment_ratio = 0.5;   // in (0,1)
    double effect_strength = 0.5;   // >= 0; scales the true effect
    double noise_sd = 1.0;          // >= 0; continuous outcomes only
    OutcomeKind outcome_kind = OutcomeKind::binary;
    uint64_t seed = 0;

    void validate() const;

    // Constants calibrated so a large binary draw lands near average label
    // 0.60 and relative uplift 50% at treatment ratio 0.5.
    static SyntheticSpec binary_benchmark(int64_t n, int p, uint64_t seed);
};

// Features are independent U(0,1). The true effect is a sigmoid-bounded
// nonlinear function of the first min(5,p) features scaled by effect_strength;
// the baseline outcome depends smoothly on the first three features; all
// remaining features are noise. true_effect holds the realized per-row effect,
// so E[y | w=1, x] - E[y | w=0, x] equals the stored value exactly.
UpliftDataset synthesize(const SyntheticSpec& spec);

}  // namespace utb
