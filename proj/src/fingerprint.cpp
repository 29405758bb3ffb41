#include "probefp/fingerprint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "probefp/errors.hpp"
#include "probefp/filters.hpp"

namespace probefp {

namespace {

constexpr char kMagic[8] = {'P', 'R', 'F', 'P', 'F', 'P', 'R', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    return static_cast<std::uint64_t>(get_u32(p)) |
           static_cast<std::uint64_t>(get_u32(p + 4)) << 32;
}

}  // namespace

Fingerprint fingerprint(const FingerprintModel& model, const ProbeVector& x) {
    Fingerprint fp(model.bits());
    for (int m = 0; m < model.bits(); ++m) {
        const WeakClassifier& c = model.classifiers[static_cast<std::size_t>(m)];
        fp.set_bit(m, response(c.filter, x) > c.threshold);
    }
    return fp;
}

std::vector<Fingerprint> fingerprint_all(const FingerprintModel& model,
                                         std::span<const ProbeVector> xs) {
    std::vector<Fingerprint> fps;
    fps.reserve(xs.size());
    for (const ProbeVector& x : xs) fps.push_back(fingerprint(model, x));
    return fps;
}

int hamming(const Fingerprint& f1, const Fingerprint& f2) {
    if (f1.size() != f2.size()) {
        throw evaluation_error("fingerprint length mismatch: " + std::to_string(f1.size()) +
                               " vs " + std::to_string(f2.size()));
    }
    int distance = 0;
    const auto b1 = f1.bytes();
    const auto b2 = f2.bytes();
    for (std::size_t i = 0; i < b1.size(); ++i) {
        distance += std::popcount(static_cast<unsigned>(b1[i] ^ b2[i]));
    }
    return distance;
}

double weighted_score(const FingerprintModel& model, const Fingerprint& f1,
                      const Fingerprint& f2) {
    if (f1.size() != f2.size()) {
        throw evaluation_error("fingerprint length mismatch: " + std::to_string(f1.size()) +
                               " vs " + std::to_string(f2.size()));
    }
    if (f1.size() != model.bits()) {
        throw evaluation_error("fingerprint length " + std::to_string(f1.size()) +
                               " does not match the model's " + std::to_string(model.bits()) +
                               " bits");
    }
    double score = 0.0;
    for (int m = 0; m < model.bits(); ++m) {
        const double c = model.classifiers[static_cast<std::size_t>(m)].confidence;
        score += f1.bit(m) == f2.bit(m) ? c : -c;
    }
    return score;
}

int predict_match(const Fingerprint& f1, const Fingerprint& f2, int tau) {
    if (tau < 0 || tau > f1.size() + 1) {
        throw evaluation_error("tau " + std::to_string(tau) + " outside [0, " +
                               std::to_string(f1.size() + 1) + "]");
    }
    return hamming(f1, f2) < tau ? +1 : -1;
}

void save_fingerprints(const std::filesystem::path& path, std::span<const Fingerprint> fps) {
    const int bits = fps.empty() ? 0 : fps.front().size();
    for (const Fingerprint& fp : fps) {
        if (fp.size() != bits) {
            throw evaluation_error("fingerprint batch mixes lengths");
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ingest_error("cannot open fingerprint file for writing: " + path.string());
    }
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(bits));
    put_u64(out, fps.size());
    for (const Fingerprint& fp : fps) {
        out.write(reinterpret_cast<const char*>(fp.bytes().data()),
                  static_cast<std::streamsize>(fp.bytes().size()));
    }
    if (!out) {
        throw ingest_error("write failed: " + path.string());
    }
}

std::vector<Fingerprint> load_fingerprints(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ingest_error("cannot open fingerprint file: " + path.string());
    }
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ingest_error("not a fingerprint batch file: " + path.string());
    }
    std::uint8_t head[16];
    if (!in.read(reinterpret_cast<char*>(head), sizeof(head))) {
        throw ingest_error("truncated fingerprint batch header: " + path.string());
    }
    const std::uint32_t version = get_u32(head);
    if (version != kVersion) {
        throw ingest_error("unsupported fingerprint batch version " + std::to_string(version) +
                           " (supported: " + std::to_string(kVersion) + ")");
    }
    const int bits = static_cast<int>(get_u32(head + 4));
    const std::uint64_t count = get_u64(head + 8);
    const std::size_t record_bytes = (static_cast<std::size_t>(bits) + 7) / 8;

    std::vector<Fingerprint> fps;
    fps.reserve(count);
    std::vector<char> buf(record_bytes);
    for (std::uint64_t r = 0; r < count; ++r) {
        if (record_bytes > 0 &&
            !in.read(buf.data(), static_cast<std::streamsize>(record_bytes))) {
            throw ingest_error("truncated fingerprint record " + std::to_string(r) + ": " +
                               path.string());
        }
        Fingerprint fp(bits);
        for (int m = 0; m < bits; ++m) {
            fp.set_bit(m, (static_cast<std::uint8_t>(buf[static_cast<std::size_t>(m) / 8]) >>
                           (7 - m % 8)) &
                              1u);
        }
        fps.push_back(std::move(fp));
    }
    return fps;
}

double compression_ratio(int bits) {
    return static_cast<double>(kProbeVectorBits) / bits;
}

std::string compression_ratio_display(int bits) {
    // The comparison tables keep one decimal and drop the rest (55.75 -> 55.7).
    const int tenths = kProbeVectorBits * 10 / bits;
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

}  // namespace probefp
