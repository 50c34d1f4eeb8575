#pragma once

#include <cstdint>

namespace radstein {

// Counter-based pseudo-random primitives: the word at (seed, index) is a pure
// function of both arguments, so streams can be evaluated out of order and in
// parallel without changing any value.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + (index + 1) * kGolden);
}

// Uniform in [0, 1) with 53 random bits.
inline double counter_uniform01(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_word(seed, index) >> 11) * 0x1.0p-53;
}

// +1 with probability p, else -1.
inline int counter_sign(std::uint64_t seed, std::uint64_t index, double p) {
    return counter_uniform01(seed, index) < p ? +1 : -1;
}

// Independent-stream seed derivation (paths, test batteries).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) + stream * kGolden);
}

// Sequential convenience wrapper over the counter primitives.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    double uniform() { return counter_uniform01(seed_, next_++); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(counter_word(seed_, next_++) %
                                     static_cast<std::uint64_t>(hi - lo + 1));
    }

    int sign(double p = 0.5) { return uniform() < p ? +1 : -1; }

private:
    std::uint64_t seed_;
    std::uint64_t next_ = 0;
};

}  // namespace radstein
