#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace probefp {

// One captured 802.11 frame with the link-layer (radiotap) header removed.
struct RawFrame {
    std::vector<std::uint8_t> payload;
    std::uint64_t timestamp_us = 0;
    int channel = 0;  // 0 when the capture carries no channel information
    std::string device_label;
};

struct RawCapture {
    std::vector<RawFrame> frames;
};

// Resolves frames to device labels. The public corpora are organised as one
// capture file per device, so a whole-file label is the common case; the
// per-transmitter map handles mixed captures.
struct LabelMap {
    std::string default_label;
    std::map<std::string, std::string> by_transmitter;  // "aa:bb:cc:dd:ee:ff" -> label
    int default_channel = 0;
};

std::string format_mac(const std::uint8_t mac[6]);

// Reads a classic pcap file (micro- or nanosecond magic, either byte order)
// and returns the management frames of subtype probe request, in capture
// order. Supported link types: 105 (raw 802.11) and 127 (radiotap); radiotap
// headers are skipped using their declared length, and the radiotap channel
// field populates RawFrame::channel when present.
RawCapture load_capture(const std::filesystem::path& path, const LabelMap& labels);

}  // namespace probefp
