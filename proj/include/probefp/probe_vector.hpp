#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace probefp {

inline constexpr int kProbeVectorBits = 1784;
inline constexpr int kProbeVectorBytes = 223;

// Canonical fixed-width representation of one dissected probe request.
// Bits are numbered 0..1783, most significant bit of each byte first, so
// bit j lives in byte j/8 at position j%8 counted from the MSB.
struct ProbeVector {
    std::array<std::uint8_t, kProbeVectorBytes> bytes{};
    std::string device_label;
    int channel = 0;
    std::int64_t source_frame_index = -1;

    bool bit(int index) const {
        return (bytes[static_cast<std::size_t>(index) / 8] >> (7 - index % 8)) & 1u;
    }
    void set_bit(int index, bool value) {
        auto& b = bytes[static_cast<std::size_t>(index) / 8];
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - index % 8));
        b = value ? (b | mask) : (b & static_cast<std::uint8_t>(~mask));
    }

    // Identity is (bits, label, channel); frame provenance is bookkeeping
    // and is not preserved by the dataset file format.
    friend bool operator==(const ProbeVector& lhs, const ProbeVector& rhs) {
        return lhs.bytes == rhs.bytes && lhs.device_label == rhs.device_label &&
               lhs.channel == rhs.channel;
    }
};

// Binary dataset file: 16-byte header (8-byte magic, u32 version, u32
// reserved), then per record: u16 label length, label bytes, u8 channel,
// 223 vector bytes. Integers little-endian.
void save_vectors(const std::filesystem::path& path, std::span<const ProbeVector> vectors);
std::vector<ProbeVector> load_vectors(const std::filesystem::path& path);

}  // namespace probefp
