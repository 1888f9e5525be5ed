#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "burstsim/errors.hpp"

namespace burstsim {

// Deterministic random stream. All stochastic draws in a simulation come
// from one of these; the core event loop itself never draws. Distribution
// helpers are implemented here because the std::* distributions are not
// pinned by the standard and differ across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw Error("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
        if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(gen_());
        const std::uint64_t bound = span + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
        std::uint64_t draw;
        do {
            draw = gen_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % bound);
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Exponential with the given mean (inverse CDF).
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

    // Index drawn from a discrete distribution given by non-negative weights.
    std::size_t pick_weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw InvalidDistribution("pick_weighted: weights sum to zero");
        double u = uniform01() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace burstsim
