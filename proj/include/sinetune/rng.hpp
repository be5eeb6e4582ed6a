#pragma once

#include <cstdint>
#include <random>

namespace sinetune {

/// Seeded mt19937_64 with explicit real/integer mappings, so the sample
/// stream does not depend on standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        auto offset = static_cast<std::uint64_t>(uniform() * static_cast<double>(span));
        if (offset >= span) offset = span - 1;
        return lo + static_cast<std::int64_t>(offset);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace sinetune
