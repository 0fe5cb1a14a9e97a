#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relaysim {

// Deterministic random source. All draws go through hand-rolled mappings of
// the raw mt19937_64 output instead of std::uniform_*_distribution, whose
// results vary across standard library implementations. Identical seeds give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t raw() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(uniform() * n) % n; }

    // Child generator with a stream-separated seed.
    Rng split(uint64_t stream) {
        return Rng(engine_() ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace relaysim
