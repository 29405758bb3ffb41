#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "probefp/probe_vector.hpp"

namespace probefp {

// Haar-like bitmask filter: P zero bits, an L-bit window of +/-1 weights,
// then zeros to the end of the 1784-bit vector.
//   A: first half of the window +1, second half -1
//   B: complement of A
//   C: all -1
//   D: all +1
enum class FilterKind : std::uint8_t { A, B, C, D };

char kind_name(FilterKind kind);
FilterKind kind_from_name(char name);

struct BitmaskFilter {
    FilterKind kind = FilterKind::D;
    int length = 0;  // L, bits; even for kinds A and B
    int prefix = 0;  // P, zero bits before the window

    int suffix() const { return kProbeVectorBits - prefix - length; }

    friend bool operator==(const BitmaskFilter&, const BitmaskFilter&) = default;
};

// Extremes of the filter response over all possible bit windows.
int min_response(const BitmaskFilter& filter);
int max_response(const BitmaskFilter& filter);

struct BankParams {
    std::vector<int> lengths{4, 8, 16};
    int stride = 8;
    std::vector<FilterKind> kinds{FilterKind::A, FilterKind::B, FilterKind::C, FilterKind::D};
};

struct FilterBank {
    std::vector<BitmaskFilter> filters;
    BankParams params;

    int size() const { return static_cast<int>(filters.size()); }
};

// Enumerates, for each kind and length, windows at P = 0, stride, 2*stride,
// ... while P+L <= 1784. Ordering is (kind, length, prefix); the
// construction is duplicate-free.
FilterBank generate_bank(const BankParams& params);

int response(const BitmaskFilter& filter, const ProbeVector& x);

// Row n holds the responses of vector n to every filter in bank order.
// Responses fit in a signed byte for the supported window lengths.
using ResponseMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

ResponseMatrix response_matrix(const FilterBank& bank, std::span<const ProbeVector> xs);

}  // namespace probefp
