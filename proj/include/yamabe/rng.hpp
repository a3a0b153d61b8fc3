#pragma once

#include <random>

namespace yamabe {

// Uniform draws built directly from the engine's 64-bit output;
// std::uniform_real_distribution is not bit-for-bit portable.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * uniform_unit(rng);
}

}  // namespace yamabe
