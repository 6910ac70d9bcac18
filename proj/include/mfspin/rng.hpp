#ifndef MFSPIN_RNG_HPP
#define MFSPIN_RNG_HPP

#include <cstdint>

namespace mfspin {

// Counter-based splitmix64: element i of a stream is a pure function of
// (seed, i), so any draw can be reproduced without replaying the stream.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_mix(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Map to (0,1): use the top 53 bits, offset by half an ulp so 0 and 1 are
// never produced (inverse-CDF lookups stay inside the table).
inline double to_unit_interval(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
    return to_unit_interval(splitmix64_at(seed, index));
}

} // namespace mfspin

#endif
