#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "probefp/model.hpp"
#include "probefp/probe_vector.hpp"

namespace probefp {

// M-bit binary descriptor of one probe request. Bit m is 1 when the m-th
// weak classifier's filter response exceeds its threshold. Packed with bit m
// in byte m/8, position m%8 from the most significant bit; padding bits in
// the last byte are zero.
class Fingerprint {
public:
    Fingerprint() = default;
    explicit Fingerprint(int bit_count)
        : bit_count_(bit_count), bytes_(static_cast<std::size_t>((bit_count + 7) / 8), 0) {}

    int size() const { return bit_count_; }
    bool bit(int m) const {
        return (bytes_[static_cast<std::size_t>(m) / 8] >> (7 - m % 8)) & 1u;
    }
    void set_bit(int m, bool value) {
        auto& b = bytes_[static_cast<std::size_t>(m) / 8];
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - m % 8));
        b = value ? (b | mask) : (b & static_cast<std::uint8_t>(~mask));
    }
    std::span<const std::uint8_t> bytes() const { return bytes_; }

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

private:
    int bit_count_ = 0;
    std::vector<std::uint8_t> bytes_;
};

Fingerprint fingerprint(const FingerprintModel& model, const ProbeVector& x);
std::vector<Fingerprint> fingerprint_all(const FingerprintModel& model,
                                         std::span<const ProbeVector> xs);

// Number of differing bit positions; throws on length mismatch.
int hamming(const Fingerprint& f1, const Fingerprint& f2);

// Confidence-weighted agreement score: sum of c_m over agreeing bits minus
// sum over differing bits. Larger means more likely matching; with all
// c_m = 1 it equals M - 2 * hamming.
double weighted_score(const FingerprintModel& model, const Fingerprint& f1,
                      const Fingerprint& f2);

// +1 iff hamming(f1, f2) < tau. tau ranges over [0, M+1].
int predict_match(const Fingerprint& f1, const Fingerprint& f2, int tau);

// Batch file: 8-byte magic, u32 version, u32 bit count M, u64 record count,
// then ceil(M/8) bytes per fingerprint. Integers little-endian.
void save_fingerprints(const std::filesystem::path& path, std::span<const Fingerprint> fps);
std::vector<Fingerprint> load_fingerprints(const std::filesystem::path& path);

// Storage accounting against the 1784-bit raw vector.
double compression_ratio(int bits);
// Ratio with one decimal, truncated toward zero (16 -> "111.5", 32 -> "55.7").
std::string compression_ratio_display(int bits);

}  // namespace probefp
