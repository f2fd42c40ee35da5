#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace atomarray {

// Counter-based random numbers: every draw is a pure function of its key, so
// disorder realizations come out identical no matter how the sweep is
// scheduled across workers.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Uniform in (0, 1]; the +1 keeps log() finite in Box-Muller.
inline double uniform_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal keyed by (seed, realization, atom, axis).
inline double keyed_normal(std::uint64_t seed, std::uint64_t realization,
                           std::uint64_t atom, std::uint64_t axis) {
    const std::uint64_t k = mix_key(seed, realization, atom, axis);
    const double u1 = uniform_from_bits(splitmix64(k));
    const double u2 = uniform_from_bits(splitmix64(k ^ 0xd1b54a32d192ed03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Zero-mean, unit-variance uniform draw (support [-sqrt(3), sqrt(3)]).
inline double keyed_uniform(std::uint64_t seed, std::uint64_t realization,
                            std::uint64_t atom, std::uint64_t axis) {
    const std::uint64_t k = mix_key(seed, realization, atom, axis);
    const double u = uniform_from_bits(splitmix64(k));
    return (2.0 * u - 1.0) * 1.7320508075688772;
}

}  // namespace atomarray
