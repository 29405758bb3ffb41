#include "probefp/dissect.hpp"

#include <algorithm>

#include "probefp/errors.hpp"
#include "probefp/log.hpp"

namespace probefp {

namespace {

constexpr std::size_t kManagementHeaderBytes = 24;

// Copies a length byte plus payload into the vector, zero-padding short
// payloads and truncating long ones with a warning.
void place_ie(ProbeVector& v, int length_offset_bits, int payload_offset_bits,
              int payload_width_bytes, std::span<const std::uint8_t> payload,
              const char* name) {
    std::size_t n = payload.size();
    if (n > static_cast<std::size_t>(payload_width_bytes)) {
        warn(std::string(name) + " payload of " + std::to_string(n) +
             " bytes truncated to " + std::to_string(payload_width_bytes));
        n = static_cast<std::size_t>(payload_width_bytes);
    }
    v.bytes[static_cast<std::size_t>(length_offset_bits) / 8] =
        static_cast<std::uint8_t>(payload.size());
    std::copy_n(payload.begin(), n, v.bytes.begin() + payload_offset_bits / 8);
}

}  // namespace

ProbeVector dissect(std::span<const std::uint8_t> frame) {
    if (frame.size() < kManagementHeaderBytes) {
        throw ingest_error("frame shorter than the 24-byte management header");
    }

    ProbeVector v;
    bool have_ht = false;
    bool have_ext = false;
    std::vector<std::uint8_t> vendor;

    // Tagged parameters: element id, length, payload. A probe request body
    // has no fixed fields, so TLVs start right after the header.
    std::size_t pos = kManagementHeaderBytes;
    while (pos < frame.size()) {
        if (pos + 2 > frame.size()) {
            throw ingest_error("malformed element at offset " + std::to_string(pos) +
                               ": missing length byte");
        }
        const std::uint8_t element_id = frame[pos];
        const std::uint8_t length = frame[pos + 1];
        if (pos + 2 + length > frame.size()) {
            throw ingest_error("malformed element id " + std::to_string(element_id) +
                               " at offset " + std::to_string(pos) + ": declared length " +
                               std::to_string(length) + " exceeds remaining " +
                               std::to_string(frame.size() - pos - 2) + " bytes");
        }
        const std::span<const std::uint8_t> payload = frame.subspan(pos + 2, length);

        switch (element_id) {
            case kElementIdHt:
                if (have_ht) {
                    warn("duplicate HT Capabilities element ignored");
                } else {
                    place_ie(v, kHtLengthOffset, kHtPayloadOffset, kHtPayloadBytes, payload,
                             "HT Capabilities");
                    have_ht = true;
                }
                break;
            case kElementIdExt:
                if (have_ext) {
                    warn("duplicate Extended Capabilities element ignored");
                } else {
                    place_ie(v, kExtLengthOffset, kExtPayloadOffset, kExtPayloadBytes, payload,
                             "Extended Capabilities");
                    have_ext = true;
                }
                break;
            case kElementIdVendor:
                // Raw TLV, id and length bytes included, in frame order.
                vendor.push_back(element_id);
                vendor.push_back(length);
                vendor.insert(vendor.end(), payload.begin(), payload.end());
                break;
            default:
                break;
        }
        pos += 2 + length;
    }

    if (vendor.size() > static_cast<std::size_t>(kVendorBytes)) {
        warn("vendor region of " + std::to_string(vendor.size()) + " bytes truncated to " +
             std::to_string(kVendorBytes));
        vendor.resize(static_cast<std::size_t>(kVendorBytes));
    }
    std::copy(vendor.begin(), vendor.end(), v.bytes.begin() + kVendorOffset / 8);
    return v;
}

std::vector<ProbeVector> export_vectors(const RawCapture& capture) {
    std::vector<ProbeVector> vectors;
    vectors.reserve(capture.frames.size());
    for (std::size_t i = 0; i < capture.frames.size(); ++i) {
        const RawFrame& frame = capture.frames[i];
        ProbeVector v;
        try {
            v = dissect(frame.payload);
        } catch (const Error& e) {
            throw ingest_error("frame " + std::to_string(i) + ": " + e.what());
        }
        v.device_label = frame.device_label;
        v.channel = frame.channel;
        v.source_frame_index = static_cast<std::int64_t>(i);
        vectors.push_back(std::move(v));
    }
    return vectors;
}

std::string segment_label(int p, int l) {
    struct Segment {
        int begin;
        int end;
        const char* name;
    };
    static constexpr Segment kSegments[] = {
        {kHtLengthOffset, kHtPayloadOffset, "Length HT Capabilities"},
        {kHtPayloadOffset, kExtLengthOffset, "HT Capabilities"},
        {kExtLengthOffset, kExtPayloadOffset, "Len. Extended Capabilities"},
        {kExtPayloadOffset, kVendorOffset, "Extended Capabilities"},
        {kVendorOffset, kVendorOffset + 8, "Vendor Specific Tags"},
        {kVendorOffset + 8, kVendorOffset + 16, "Len. Vendor Specific Tags"},
        {kVendorOffset + 16, kProbeVectorBits, "Vendor Specific Tags"},
    };
    std::string label;
    const char* last = nullptr;
    for (const Segment& seg : kSegments) {
        if (p < seg.end && p + l > seg.begin && seg.name != last) {
            if (!label.empty()) label += " + ";
            label += seg.name;
            last = seg.name;
        }
    }
    return label;
}

}  // namespace probefp
