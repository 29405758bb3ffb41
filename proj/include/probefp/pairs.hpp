#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "probefp/probe_vector.hpp"

namespace probefp {

// Ground-truth relationship between two probe vectors: y = +1 when both come
// from the same device, -1 otherwise.
struct LabeledPair {
    std::int32_t a = 0;
    std::int32_t b = 0;
    int y = 0;

    friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

struct PairDataset {
    std::vector<LabeledPair> pairs;
    std::uint64_t rng_seed = 0;
    std::string rng_name = "mt19937_64";

    int count_with_label(int y) const;
};

// Samples n_matching unique same-device pairs (devices visited round-robin,
// pairs uniform within a device) plus n_matching unique cross-device pairs
// (device pairs uniform). Deterministic for a given seed; throws a capacity
// error stating the achievable maximum when a side cannot be filled.
PairDataset build_pairs(std::span<const ProbeVector> vectors, int n_matching, std::uint64_t seed);

// Stratified train/test split: each side keeps the 50/50 class balance
// within rounding and every pair lands in exactly one side.
std::pair<PairDataset, PairDataset> split(const PairDataset& ds, double train_fraction,
                                          std::uint64_t seed);

// Line-oriented text format: '#'-comment header carrying seed, rng and
// counts, then one "a,b,y" row per pair.
void save_pairs(const std::filesystem::path& path, const PairDataset& ds);
PairDataset load_pairs(const std::filesystem::path& path);

}  // namespace probefp
