#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "probefp/pcap.hpp"
#include "probefp/probe_vector.hpp"

namespace probefp {

// Fixed bit layout of the canonical vector. Element id bytes of the HT and
// Extended Capabilities elements are dropped; the vendor region keeps its
// raw TLVs (element id 221, length, payload) verbatim.
inline constexpr int kHtLengthOffset = 0;     // 1 byte: HT Capabilities length
inline constexpr int kHtPayloadOffset = 8;    // 26 bytes
inline constexpr int kExtLengthOffset = 216;  // 1 byte: Extended Capabilities length
inline constexpr int kExtPayloadOffset = 224; // 13 bytes
inline constexpr int kVendorOffset = 328;     // 182 bytes of raw vendor TLVs

inline constexpr int kHtPayloadBytes = 26;
inline constexpr int kExtPayloadBytes = 13;
inline constexpr int kVendorBytes = 182;

inline constexpr std::uint8_t kElementIdHt = 45;
inline constexpr std::uint8_t kElementIdExt = 127;
inline constexpr std::uint8_t kElementIdVendor = 221;

// Dissects one probe-request frame (management header plus tagged
// parameters) into the canonical 1784-bit vector. Pure function; label,
// channel and frame index are left at their defaults.
ProbeVector dissect(std::span<const std::uint8_t> frame);

std::vector<ProbeVector> export_vectors(const RawCapture& capture);

// Human-readable name of the field(s) a bit window [p, p+l) overlaps,
// e.g. "HT Capabilities" or "Len. Vendor Specific Tags".
std::string segment_label(int p, int l);

}  // namespace probefp
