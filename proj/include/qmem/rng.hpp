#ifndef QMEM_RNG_HPP
#define QMEM_RNG_HPP

#include <cstdint>

namespace qmem {

// Seedable deterministic random source. Counter-derived substreams let trial
// k draw an identical sequence regardless of execution order: stream k is
// splitmix64 started at mix(seed, k).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53 random bits.
    double next_double();

    bool bernoulli(double p);

private:
    std::uint64_t state_;
};

}  // namespace qmem

#endif  // QMEM_RNG_HPP
