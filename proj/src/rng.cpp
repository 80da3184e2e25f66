#include "qmem/rng.hpp"

namespace qmem {

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
    // Mix seed and stream index through two splitmix64 steps so adjacent
    // indices land in unrelated regions of the state space.
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
    return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) { return next_double() < p; }

}  // namespace qmem
