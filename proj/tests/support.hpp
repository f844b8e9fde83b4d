#pragma once

// Seeded random instances for property tests.

#include "fragsec/model.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

namespace fragsec::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    bool coin() { return uniform(0.0, 1.0) < 0.5; }

    ModelParams params(bool naive = false) {
        ModelParams p;
        p.Z_A = uniform(0.2, 0.8);
        p.T = uniform(0.5, 10.0);
        p.beta = naive ? 0.0 : uniform(0.05, 2.0);
        p.C1 = uniform(0.0, 3.0);
        p.C2 = uniform(0.0, 3.0);
        p.S1 = uniform(0.0, 3.0);
        p.S2 = uniform(0.0, 3.0);
        p.Q = uniform(0.5, 1.5);
        return p;
    }

    /// Interior profile with a gap of at least `min_gap`.
    StrategyProfile profile(const ModelParams& p, double min_gap = 0.05) {
        for (;;) {
            StrategyProfile s{uniform(0.0, p.Z_A), uniform(0.0, 1.0 - p.Z_A), uniform(0.0, p.Q),
                              uniform(0.0, p.Q)};
            if (s.gap() >= min_gap)
                return s;
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace fragsec::testing
