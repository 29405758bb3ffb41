#include <doctest.h>

#include <random>

#include "probefp/dissect.hpp"
#include "probefp/errors.hpp"
#include "probefp/log.hpp"
#include "probefp/pcap.hpp"
#include "probefp/probe_vector.hpp"
#include "testutil.hpp"

using namespace probefp;
using testutil::Tlv;

namespace {

std::vector<std::uint8_t> bytes_0_to(int n) {
    std::vector<std::uint8_t> out;
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(i + 1));
    return out;
}

}  // namespace

TEST_CASE("HT Capabilities lands at the documented offsets") {
    const std::vector<std::uint8_t> payload = bytes_0_to(26);
    const ProbeVector v = dissect(testutil::probe_request({Tlv{45, payload}}));

    CHECK(v.bytes[0] == 26);  // bits 0-7 encode the length
    for (int i = 0; i < 26; ++i) {
        CHECK(v.bytes[1 + i] == payload[static_cast<std::size_t>(i)]);
    }
    // Only HT present: everything from bit 216 on stays zero.
    for (int bit = kExtLengthOffset; bit < kProbeVectorBits; ++bit) {
        CHECK_FALSE(v.bit(bit));
    }
}

TEST_CASE("Extended Capabilities lands at bits 216..327") {
    const std::vector<std::uint8_t> payload = bytes_0_to(11);
    const ProbeVector v = dissect(testutil::probe_request({Tlv{127, payload}}));

    CHECK(v.bytes[kExtLengthOffset / 8] == 11);
    for (int i = 0; i < 11; ++i) {
        CHECK(v.bytes[kExtPayloadOffset / 8 + i] == payload[static_cast<std::size_t>(i)]);
    }
    for (int bit = 0; bit < kExtLengthOffset; ++bit) CHECK_FALSE(v.bit(bit));
    for (int bit = kVendorOffset; bit < kProbeVectorBits; ++bit) CHECK_FALSE(v.bit(bit));
}

TEST_CASE("vendor tags are stored as raw TLVs from bit 328, in frame order") {
    const std::vector<std::uint8_t> first{0x00, 0x50, 0xf2, 0xaa};
    const std::vector<std::uint8_t> second{0x00, 0x10, 0x18, 0xbb, 0xcc};
    const ProbeVector v =
        dissect(testutil::probe_request({Tlv{221, first}, Tlv{0, {0x41}}, Tlv{221, second}}));

    const int base = kVendorOffset / 8;
    CHECK(v.bytes[base + 0] == 221);
    CHECK(v.bytes[base + 1] == 4);
    CHECK(v.bytes[base + 2] == 0x00);
    CHECK(v.bytes[base + 3] == 0x50);
    CHECK(v.bytes[base + 4] == 0xf2);
    CHECK(v.bytes[base + 5] == 0xaa);
    CHECK(v.bytes[base + 6] == 221);
    CHECK(v.bytes[base + 7] == 5);
    CHECK(v.bytes[base + 12] == 0xcc);
    // Only vendor content: every bit before 328 stays zero.
    for (int bit = 0; bit < kVendorOffset; ++bit) CHECK_FALSE(v.bit(bit));
}

TEST_CASE("frame without the three relevant elements dissects to all zeros") {
    const ProbeVector v = dissect(testutil::probe_request({Tlv{0, {0x6e, 0x65, 0x74}}}));
    for (const auto byte : v.bytes) CHECK(byte == 0);
}

TEST_CASE("dissection is deterministic") {
    const auto frame = testutil::synthetic_probe_request(3, 99);
    CHECK(dissect(frame) == dissect(frame));
}

TEST_CASE("malformed TLV is reported with the offending element") {
    auto frame = testutil::probe_request({});
    frame.push_back(45);
    frame.push_back(200);  // declares 200 payload bytes, none follow
    CHECK_THROWS_WITH_AS(dissect(frame), doctest::Contains("element id 45"), Error);
}

TEST_CASE("truncated management header is rejected") {
    const std::vector<std::uint8_t> frame(10, 0x40);
    CHECK_THROWS_AS(dissect(frame), Error);
}

TEST_CASE("over-long payloads are truncated with a warning, length byte kept") {
    std::vector<std::string> warnings;
    set_warning_handler([&](const std::string& w) { warnings.push_back(w); });

    const std::vector<std::uint8_t> payload = bytes_0_to(30);
    const ProbeVector v = dissect(testutil::probe_request({Tlv{45, payload}}));
    CHECK(v.bytes[0] == 30);
    CHECK(v.bytes[26] == payload[25]);
    // Byte 27 is the Extended Capabilities length slot and must stay zero.
    CHECK(v.bytes[27] == 0);
    CHECK(warnings.size() == 1);

    set_warning_handler(nullptr);
}

TEST_CASE("duplicate HT element: first occurrence wins") {
    std::vector<std::string> warnings;
    set_warning_handler([&](const std::string& w) { warnings.push_back(w); });

    const ProbeVector v = dissect(
        testutil::probe_request({Tlv{45, {0x11, 0x22}}, Tlv{45, {0x99, 0x99, 0x99}}}));
    CHECK(v.bytes[0] == 2);
    CHECK(v.bytes[1] == 0x11);
    CHECK(warnings.size() == 1);

    set_warning_handler(nullptr);
}

TEST_CASE("load_capture keeps only probe requests, in capture order") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "mixed.pcap";
    testutil::write_pcap(path, {
                                   testutil::probe_request({Tlv{45, {0x01}}}),
                                   testutil::beacon({Tlv{0, {0x61}}}),
                                   testutil::probe_request({Tlv{127, {0x02}}}),
                                   testutil::beacon({}),
                                   testutil::probe_request({Tlv{221, {0x03, 0x04, 0x05}}}),
                               });

    LabelMap labels;
    labels.default_label = "dev-A";
    const RawCapture capture = load_capture(path, labels);
    REQUIRE(capture.frames.size() == 3);
    CHECK(capture.frames[0].device_label == "dev-A");
    CHECK(capture.frames[0].payload[24] == 45);
    CHECK(capture.frames[1].payload[24] == 127);
    CHECK(capture.frames[2].payload[24] == 221);
    CHECK(capture.frames[0].timestamp_us < capture.frames[2].timestamp_us);
}

TEST_CASE("empty capture loads as zero frames") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "empty.pcap";
    testutil::write_pcap(path, {});
    LabelMap labels;
    labels.default_label = "dev-A";
    CHECK(load_capture(path, labels).frames.empty());
}

TEST_CASE("radiotap captures: header skipped, channel extracted") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "radiotap.pcap";
    auto packet = testutil::radiotap_prefix(6);
    const auto frame = testutil::probe_request({Tlv{45, {0x07}}});
    packet.insert(packet.end(), frame.begin(), frame.end());
    testutil::write_pcap(path, {packet}, 127);

    LabelMap labels;
    labels.default_label = "dev-B";
    const RawCapture capture = load_capture(path, labels);
    REQUIRE(capture.frames.size() == 1);
    CHECK(capture.frames[0].channel == 6);
    CHECK(capture.frames[0].payload == frame);
}

TEST_CASE("per-transmitter labels override the file default") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "two.pcap";
    testutil::write_pcap(path, {
                                   testutil::probe_request({}, 0x01),
                                   testutil::probe_request({}, 0x02),
                               });
    LabelMap labels;
    labels.default_label = "other";
    labels.by_transmitter["02:00:00:00:00:02"] = "phone";
    const RawCapture capture = load_capture(path, labels);
    REQUIRE(capture.frames.size() == 2);
    CHECK(capture.frames[0].device_label == "other");
    CHECK(capture.frames[1].device_label == "phone");
}

TEST_CASE("frame with no resolvable label names the frame index") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "unlabeled.pcap";
    testutil::write_pcap(path, {testutil::probe_request({})});
    CHECK_THROWS_WITH_AS(load_capture(path, LabelMap{}), doctest::Contains("frame 0"), Error);
}

TEST_CASE("ingest errors: missing file, bad magic, bad link type, truncation") {
    testutil::TempDir tmp("probefp_pcap");
    CHECK_THROWS_AS(load_capture(tmp.path / "missing.pcap", LabelMap{}), Error);

    const auto garbage = tmp.path / "garbage.pcap";
    {
        std::ofstream out(garbage, std::ios::binary);
        out << "not a capture at all, definitely not one";
    }
    CHECK_THROWS_WITH_AS(load_capture(garbage, LabelMap{}), doctest::Contains("magic"), Error);

    const auto ethernet = tmp.path / "ethernet.pcap";
    testutil::write_pcap(ethernet, {}, 1);
    CHECK_THROWS_WITH_AS(load_capture(ethernet, LabelMap{}), doctest::Contains("link type"),
                         Error);

    const auto truncated = tmp.path / "truncated.pcap";
    testutil::write_pcap(truncated, {testutil::probe_request({})});
    std::filesystem::resize_file(truncated, std::filesystem::file_size(truncated) - 5);
    LabelMap labels;
    labels.default_label = "dev";
    CHECK_THROWS_WITH_AS(load_capture(truncated, labels), doctest::Contains("truncated"), Error);
}

TEST_CASE("export_vectors keeps order and annotates provenance") {
    testutil::TempDir tmp("probefp_pcap");
    const auto path = tmp.path / "three.pcap";
    testutil::write_pcap(path, {
                                   testutil::synthetic_probe_request(0, 1),
                                   testutil::synthetic_probe_request(0, 2),
                                   testutil::synthetic_probe_request(0, 3),
                               });
    LabelMap labels;
    labels.default_label = "dev-A";
    labels.default_channel = 11;
    const std::vector<ProbeVector> vectors = export_vectors(load_capture(path, labels));
    REQUIRE(vectors.size() == 3);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        CHECK(vectors[i].source_frame_index == static_cast<std::int64_t>(i));
        CHECK(vectors[i].device_label == "dev-A");
        CHECK(vectors[i].channel == 11);
    }
    CHECK(export_vectors(RawCapture{}).empty());
}

TEST_CASE("dataset files round-trip bit-exactly") {
    testutil::TempDir tmp("probefp_dataset");
    std::mt19937_64 rng(21);
    std::vector<ProbeVector> vectors;
    for (int n = 0; n < 17; ++n) {
        vectors.push_back(
            testutil::random_vector(rng, "device-" + std::to_string(n % 3), 1 + 5 * (n % 3)));
    }
    vectors[4].device_label = "";  // empty labels survive too

    const auto path = tmp.path / "vectors.bin";
    save_vectors(path, vectors);
    const std::vector<ProbeVector> loaded = load_vectors(path);
    REQUIRE(loaded.size() == vectors.size());
    for (std::size_t n = 0; n < vectors.size(); ++n) {
        CHECK(loaded[n] == vectors[n]);
    }
}

TEST_CASE("dataset loader rejects foreign and truncated files") {
    testutil::TempDir tmp("probefp_dataset");
    const auto bogus = tmp.path / "bogus.bin";
    {
        std::ofstream out(bogus, std::ios::binary);
        out << "PRFPWRONGHEADERDATA";
    }
    CHECK_THROWS_AS(load_vectors(bogus), Error);

    const auto clipped = tmp.path / "clipped.bin";
    std::mt19937_64 rng(3);
    save_vectors(clipped, std::vector<ProbeVector>{testutil::random_vector(rng)});
    std::filesystem::resize_file(clipped, std::filesystem::file_size(clipped) - 7);
    CHECK_THROWS_WITH_AS(load_vectors(clipped), doctest::Contains("truncated"), Error);
}

TEST_CASE("segment labels mirror the canonical layout") {
    CHECK(segment_label(0, 8) == "Length HT Capabilities");
    CHECK(segment_label(16, 16) == "HT Capabilities");
    CHECK(segment_label(216, 8) == "Len. Extended Capabilities");
    CHECK(segment_label(240, 16) == "Extended Capabilities");
    CHECK(segment_label(328, 8) == "Vendor Specific Tags");
    CHECK(segment_label(336, 8) == "Len. Vendor Specific Tags");
    CHECK(segment_label(352, 16) == "Vendor Specific Tags");
    CHECK(segment_label(0, 16) == "Length HT Capabilities + HT Capabilities");
}
