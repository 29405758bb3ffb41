#include "probefp/filters.hpp"

#include <algorithm>

#include "probefp/errors.hpp"

namespace probefp {

char kind_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::A: return 'A';
        case FilterKind::B: return 'B';
        case FilterKind::C: return 'C';
        case FilterKind::D: return 'D';
    }
    return '?';
}

FilterKind kind_from_name(char name) {
    switch (name) {
        case 'A': return FilterKind::A;
        case 'B': return FilterKind::B;
        case 'C': return FilterKind::C;
        case 'D': return FilterKind::D;
        default:
            throw usage_error(std::string("unknown filter kind '") + name + "'");
    }
}

int min_response(const BitmaskFilter& filter) {
    switch (filter.kind) {
        case FilterKind::A:
        case FilterKind::B: return -filter.length / 2;
        case FilterKind::C: return -filter.length;
        case FilterKind::D: return 0;
    }
    return 0;
}

int max_response(const BitmaskFilter& filter) {
    switch (filter.kind) {
        case FilterKind::A:
        case FilterKind::B: return filter.length / 2;
        case FilterKind::C: return 0;
        case FilterKind::D: return filter.length;
    }
    return 0;
}

FilterBank generate_bank(const BankParams& params) {
    if (params.stride < 1) {
        throw usage_error("filter bank stride must be >= 1");
    }
    FilterBank bank;
    bank.params = params;

    std::vector<FilterKind> kinds = params.kinds;
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    std::vector<int> lengths = params.lengths;
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

    for (FilterKind kind : kinds) {
        for (int length : lengths) {
            if (length < 1 || length > kProbeVectorBits) {
                throw usage_error("filter length " + std::to_string(length) +
                                  " outside [1, " + std::to_string(kProbeVectorBits) + "]");
            }
            if ((kind == FilterKind::A || kind == FilterKind::B) && length % 2 != 0) {
                throw usage_error("kinds A and B require an even length, got " +
                                  std::to_string(length));
            }
            for (int prefix = 0; prefix + length <= kProbeVectorBits; prefix += params.stride) {
                bank.filters.push_back(BitmaskFilter{kind, length, prefix});
            }
        }
    }
    return bank;
}

int response(const BitmaskFilter& filter, const ProbeVector& x) {
    const int half = filter.length / 2;
    int sum = 0;
    switch (filter.kind) {
        case FilterKind::A:
            for (int k = 0; k < filter.length; ++k) {
                sum += x.bit(filter.prefix + k) ? (k < half ? 1 : -1) : 0;
            }
            break;
        case FilterKind::B:
            for (int k = 0; k < filter.length; ++k) {
                sum += x.bit(filter.prefix + k) ? (k < half ? -1 : 1) : 0;
            }
            break;
        case FilterKind::C:
            for (int k = 0; k < filter.length; ++k) {
                sum -= x.bit(filter.prefix + k);
            }
            break;
        case FilterKind::D:
            for (int k = 0; k < filter.length; ++k) {
                sum += x.bit(filter.prefix + k);
            }
            break;
    }
    return sum;
}

ResponseMatrix response_matrix(const FilterBank& bank, std::span<const ProbeVector> xs) {
    ResponseMatrix m(static_cast<Eigen::Index>(xs.size()),
                     static_cast<Eigen::Index>(bank.filters.size()));
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        const ProbeVector& x = xs[static_cast<std::size_t>(n)];
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            m(n, i) = static_cast<std::int8_t>(
                response(bank.filters[static_cast<std::size_t>(i)], x));
        }
    }
    return m;
}

}  // namespace probefp
