#include "probefp/probe_vector.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include "probefp/errors.hpp"

namespace probefp {

namespace {

constexpr char kMagic[8] = {'P', 'R', 'F', 'P', 'D', 'S', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u16(std::ofstream& out, std::uint16_t v) {
    const char buf[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(buf, 2);
}

void put_u32(std::ofstream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 4);
}

}  // namespace

void save_vectors(const std::filesystem::path& path, std::span<const ProbeVector> vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ingest_error("cannot open dataset file for writing: " + path.string());
    }
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, 0);  // reserved
    for (const ProbeVector& v : vectors) {
        if (v.device_label.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw ingest_error("device label longer than 65535 bytes");
        }
        put_u16(out, static_cast<std::uint16_t>(v.device_label.size()));
        out.write(v.device_label.data(), static_cast<std::streamsize>(v.device_label.size()));
        const char channel = static_cast<char>(v.channel);
        out.write(&channel, 1);
        out.write(reinterpret_cast<const char*>(v.bytes.data()), kProbeVectorBytes);
    }
    if (!out) {
        throw ingest_error("write failed: " + path.string());
    }
}

std::vector<ProbeVector> load_vectors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ingest_error("cannot open dataset file: " + path.string());
    }
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ingest_error("not a probe-vector dataset file: " + path.string());
    }
    std::uint8_t head[8];
    if (!in.read(reinterpret_cast<char*>(head), sizeof(head))) {
        throw ingest_error("truncated dataset header: " + path.string());
    }
    const std::uint32_t version = static_cast<std::uint32_t>(head[0]) |
                                  static_cast<std::uint32_t>(head[1]) << 8 |
                                  static_cast<std::uint32_t>(head[2]) << 16 |
                                  static_cast<std::uint32_t>(head[3]) << 24;
    if (version != kVersion) {
        throw ingest_error("unsupported dataset version " + std::to_string(version) +
                           " (supported: " + std::to_string(kVersion) + ")");
    }

    std::vector<ProbeVector> vectors;
    std::int64_t index = 0;
    for (;;) {
        std::uint8_t len_buf[2];
        in.read(reinterpret_cast<char*>(len_buf), 2);
        if (in.gcount() == 0 && in.eof()) {
            break;
        }
        if (in.gcount() != 2) {
            throw ingest_error("truncated dataset record " + std::to_string(index));
        }
        const std::size_t label_len =
            static_cast<std::size_t>(len_buf[0]) | static_cast<std::size_t>(len_buf[1]) << 8;
        ProbeVector v;
        v.device_label.resize(label_len);
        if (label_len > 0 &&
            !in.read(v.device_label.data(), static_cast<std::streamsize>(label_len))) {
            throw ingest_error("truncated dataset record " + std::to_string(index));
        }
        char channel = 0;
        if (!in.read(&channel, 1)) {
            throw ingest_error("truncated dataset record " + std::to_string(index));
        }
        v.channel = static_cast<std::uint8_t>(channel);
        if (!in.read(reinterpret_cast<char*>(v.bytes.data()), kProbeVectorBytes)) {
            throw ingest_error("truncated dataset record " + std::to_string(index));
        }
        v.source_frame_index = index++;
        vectors.push_back(std::move(v));
    }
    return vectors;
}

}  // namespace probefp
