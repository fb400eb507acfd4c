#pragma once

#include <cstdint>
#include <random>

namespace patchdct {

/// Seeded generator whose draws are identical on every standard library:
/// the mt19937_64 engine is fully specified, the distributions here are
/// written out instead of using std:: ones.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Stream for one item of a corpus, derived from (seed, index).
    static Rng for_instance(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace patchdct
