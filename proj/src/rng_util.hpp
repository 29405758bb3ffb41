#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace probefp::detail {

// Unbiased bounded draw on the raw mt19937_64 stream; keeps sampling
// reproducible across standard libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

template <typename T>
void shuffle_values(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[uniform_below(rng, i)]);
    }
}

}  // namespace probefp::detail
