#include "probefp/pcap.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "probefp/errors.hpp"

namespace probefp {

namespace {

constexpr std::uint32_t kMagicMicros = 0xa1b2c3d4;
constexpr std::uint32_t kMagicMicrosSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNanos = 0xa1b23c4d;
constexpr std::uint32_t kMagicNanosSwapped = 0x4d3cb2a1;

constexpr std::uint32_t kLinkIeee80211 = 105;
constexpr std::uint32_t kLinkRadiotap = 127;

std::uint32_t read_u32(const std::uint8_t* p, bool swap) {
    std::uint32_t v = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                      static_cast<std::uint32_t>(p[2]) << 16 |
                      static_cast<std::uint32_t>(p[3]) << 24;
    return swap ? __builtin_bswap32(v) : v;
}

std::uint16_t read_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

int channel_from_frequency(int mhz) {
    if (mhz == 2484) return 14;
    if (mhz >= 2412 && mhz <= 2472 && (mhz - 2412) % 5 == 0) return (mhz - 2412) / 5 + 1;
    return 0;
}

// Walks the radiotap present bitmap far enough to reach the channel field
// (bit 3); the fields before it have fixed sizes and alignments.
int radiotap_channel(const std::uint8_t* rt, std::size_t rt_len) {
    if (rt_len < 8) return 0;
    std::size_t present_words = 1;
    while (read_u32(rt + 4 + 4 * (present_words - 1), false) & 0x80000000u) {
        if (4 + 4 * (present_words + 1) > rt_len) return 0;
        ++present_words;
    }
    const std::uint32_t present = read_u32(rt + 4, false);
    if (!(present & (1u << 3))) return 0;

    std::size_t offset = 4 + 4 * present_words;
    if (present & (1u << 0)) {                 // TSFT: u64, aligned to 8
        offset = (offset + 7) & ~std::size_t{7};
        offset += 8;
    }
    if (present & (1u << 1)) offset += 1;      // Flags
    if (present & (1u << 2)) offset += 1;      // Rate
    offset = (offset + 1) & ~std::size_t{1};   // Channel: u16 freq + u16 flags
    if (offset + 2 > rt_len) return 0;
    return channel_from_frequency(read_u16le(rt + offset));
}

bool is_probe_request(const std::uint8_t* frame, std::size_t len) {
    if (len < 1) return false;
    const int type = (frame[0] >> 2) & 0x03;
    const int subtype = (frame[0] >> 4) & 0x0f;
    return type == 0 && subtype == 4;
}

}  // namespace

std::string format_mac(const std::uint8_t mac[6]) {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", mac[0], mac[1], mac[2],
                  mac[3], mac[4], mac[5]);
    return buf;
}

RawCapture load_capture(const std::filesystem::path& path, const LabelMap& labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ingest_error("cannot open capture file: " + path.string());
    }
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw ingest_error("read failed: " + path.string());
    }
    if (data.size() < 24) {
        throw ingest_error("not a pcap file (too short): " + path.string());
    }

    const std::uint32_t magic = read_u32(data.data(), false);
    bool swap = false;
    bool nanos = false;
    switch (magic) {
        case kMagicMicros: break;
        case kMagicMicrosSwapped: swap = true; break;
        case kMagicNanos: nanos = true; break;
        case kMagicNanosSwapped: swap = true; nanos = true; break;
        default:
            throw ingest_error("not a pcap file (bad magic): " + path.string());
    }
    const std::uint32_t linktype = read_u32(data.data() + 20, swap);
    if (linktype != kLinkIeee80211 && linktype != kLinkRadiotap) {
        throw ingest_error("unsupported pcap link type " + std::to_string(linktype) + ": " +
                           path.string());
    }

    RawCapture capture;
    std::size_t pos = 24;
    std::int64_t record_index = 0;
    while (pos < data.size()) {
        if (pos + 16 > data.size()) {
            throw ingest_error("truncated pcap record header at record " +
                               std::to_string(record_index));
        }
        const std::uint32_t ts_sec = read_u32(data.data() + pos, swap);
        const std::uint32_t ts_sub = read_u32(data.data() + pos + 4, swap);
        const std::uint32_t incl_len = read_u32(data.data() + pos + 8, swap);
        pos += 16;
        if (pos + incl_len > data.size()) {
            throw ingest_error("truncated pcap record " + std::to_string(record_index));
        }
        const std::uint8_t* pkt = data.data() + pos;
        std::size_t pkt_len = incl_len;
        pos += incl_len;
        const std::int64_t frame_index = record_index++;

        int channel = 0;
        if (linktype == kLinkRadiotap) {
            if (pkt_len < 4) continue;
            const std::uint16_t rt_len = read_u16le(pkt + 2);
            if (rt_len > pkt_len) {
                throw ingest_error("radiotap header longer than record " +
                                   std::to_string(frame_index));
            }
            channel = radiotap_channel(pkt, rt_len);
            pkt += rt_len;
            pkt_len -= rt_len;
        }

        if (!is_probe_request(pkt, pkt_len)) {
            continue;
        }
        if (pkt_len < 24) {
            throw ingest_error("probe request at record " + std::to_string(frame_index) +
                               " shorter than the management header");
        }

        RawFrame frame;
        frame.payload.assign(pkt, pkt + pkt_len);
        frame.timestamp_us =
            static_cast<std::uint64_t>(ts_sec) * 1000000 + (nanos ? ts_sub / 1000 : ts_sub);
        frame.channel = channel != 0 ? channel : labels.default_channel;

        const std::string transmitter = format_mac(pkt + 10);
        if (auto it = labels.by_transmitter.find(transmitter); it != labels.by_transmitter.end()) {
            frame.device_label = it->second;
        } else if (!labels.default_label.empty()) {
            frame.device_label = labels.default_label;
        } else {
            throw ingest_error("frame " + std::to_string(frame_index) +
                               " has no resolvable device label (transmitter " + transmitter +
                               ")");
        }
        capture.frames.push_back(std::move(frame));
    }
    return capture;
}

}  // namespace probefp
