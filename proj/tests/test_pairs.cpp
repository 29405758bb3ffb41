#include <doctest.h>

#include <random>
#include <set>

#include "probefp/errors.hpp"
#include "probefp/pairs.hpp"
#include "testutil.hpp"

using namespace probefp;

namespace {

std::vector<ProbeVector> corpus(const std::vector<std::pair<std::string, int>>& devices) {
    std::mt19937_64 rng(5);
    std::vector<ProbeVector> vectors;
    for (const auto& [label, count] : devices) {
        for (int i = 0; i < count; ++i) {
            vectors.push_back(testutil::random_vector(rng, label));
        }
    }
    return vectors;
}

void check_dataset_invariants(const PairDataset& ds, const std::vector<ProbeVector>& vectors) {
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const LabeledPair& p : ds.pairs) {
        CHECK(p.a != p.b);
        const auto key = std::minmax(p.a, p.b);
        CHECK(seen.insert(key).second);  // no unordered pair twice
        const bool same_device = vectors[static_cast<std::size_t>(p.a)].device_label ==
                                 vectors[static_cast<std::size_t>(p.b)].device_label;
        CHECK(p.y == (same_device ? +1 : -1));
    }
    CHECK(ds.count_with_label(+1) == ds.count_with_label(-1));
}

}  // namespace

TEST_CASE("two devices, two vectors each: exhaustive pairing") {
    const auto vectors = corpus({{"a", 2}, {"b", 2}});
    const PairDataset ds = build_pairs(vectors, 2, 42);
    CHECK(ds.pairs.size() == 4);
    check_dataset_invariants(ds, vectors);
    // Only two same-device pairs exist, so both must be present.
    CHECK(ds.count_with_label(+1) == 2);
}

TEST_CASE("single device cannot produce non-matching pairs") {
    const auto vectors = corpus({{"only", 6}});
    CHECK_THROWS_WITH_AS(build_pairs(vectors, 3, 1), doctest::Contains("non-matching"), Error);
}

TEST_CASE("matching capacity error reports the achievable maximum") {
    const auto vectors = corpus({{"a", 2}, {"b", 2}});  // 2 same-device pairs in total
    CHECK_THROWS_WITH_AS(build_pairs(vectors, 3, 1), doctest::Contains("only 2"), Error);
}

TEST_CASE("pair sampling is deterministic in the seed") {
    const auto vectors = corpus({{"a", 8}, {"b", 5}, {"c", 9}});
    const PairDataset first = build_pairs(vectors, 20, 777);
    const PairDataset second = build_pairs(vectors, 20, 777);
    CHECK(first.pairs == second.pairs);
    const PairDataset other = build_pairs(vectors, 20, 778);
    CHECK(first.pairs != other.pairs);
}

TEST_CASE("round-robin keeps one chatty device from dominating the positives") {
    // Device "big" has vastly more frames; round-robin should still draw
    // positives from every device that can contribute.
    const auto vectors = corpus({{"big", 40}, {"s1", 4}, {"s2", 4}, {"s3", 4}});
    const PairDataset ds = build_pairs(vectors, 12, 9);
    check_dataset_invariants(ds, vectors);

    std::set<std::string> devices_with_positive;
    for (const LabeledPair& p : ds.pairs) {
        if (p.y == +1) {
            devices_with_positive.insert(vectors[static_cast<std::size_t>(p.a)].device_label);
        }
    }
    CHECK(devices_with_positive.size() == 4);
}

TEST_CASE("labels and balance hold on a larger random corpus") {
    const auto vectors = corpus({{"a", 12}, {"b", 7}, {"c", 3}, {"d", 9}});
    const PairDataset ds = build_pairs(vectors, 30, 123);
    CHECK(ds.pairs.size() == 60);
    check_dataset_invariants(ds, vectors);
}

TEST_CASE("split keeps stratified class balance: 1000+1000 at 0.6") {
    const auto vectors = corpus({{"a", 40}, {"b", 40}, {"c", 40}, {"d", 40}});
    const PairDataset ds = build_pairs(vectors, 1000, 2024);
    const auto [train, test] = split(ds, 0.6, 99);
    CHECK(train.count_with_label(+1) == 600);
    CHECK(train.count_with_label(-1) == 600);
    CHECK(test.count_with_label(+1) == 400);
    CHECK(test.count_with_label(-1) == 400);

    // Disjoint and exhaustive.
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const LabeledPair& p : train.pairs) seen.insert(std::minmax(p.a, p.b));
    for (const LabeledPair& p : test.pairs) {
        CHECK_FALSE(seen.contains(std::minmax(p.a, p.b)));
    }
    CHECK(train.pairs.size() + test.pairs.size() == ds.pairs.size());
}

TEST_CASE("split of 2+2 pairs at 0.5 gives 1+1 / 1+1") {
    const auto vectors = corpus({{"a", 2}, {"b", 2}});
    const PairDataset ds = build_pairs(vectors, 2, 5);
    const auto [train, test] = split(ds, 0.5, 5);
    CHECK(train.count_with_label(+1) == 1);
    CHECK(train.count_with_label(-1) == 1);
    CHECK(test.count_with_label(+1) == 1);
    CHECK(test.count_with_label(-1) == 1);
}

TEST_CASE("split determinism and error cases") {
    const auto vectors = corpus({{"a", 6}, {"b", 6}});
    const PairDataset ds = build_pairs(vectors, 8, 3);
    const auto [t1, e1] = split(ds, 0.6, 42);
    const auto [t2, e2] = split(ds, 0.6, 42);
    CHECK(t1.pairs == t2.pairs);
    CHECK(e1.pairs == e2.pairs);

    CHECK_THROWS_AS(split(ds, 0.0, 1), Error);
    CHECK_THROWS_AS(split(ds, 1.0, 1), Error);

    PairDataset tiny;
    tiny.pairs = {LabeledPair{0, 1, +1}, LabeledPair{0, 2, -1}, LabeledPair{1, 2, -1}};
    CHECK_THROWS_WITH_AS(split(tiny, 0.5, 1), doctest::Contains("at least 2"), Error);
}

TEST_CASE("pair files round-trip through the text format") {
    testutil::TempDir tmp("probefp_pairs");
    const auto vectors = corpus({{"a", 5}, {"b", 4}});
    const PairDataset ds = build_pairs(vectors, 6, 31337);

    const auto path = tmp.path / "pairs.txt";
    save_pairs(path, ds);
    const PairDataset loaded = load_pairs(path);
    CHECK(loaded.pairs == ds.pairs);
    CHECK(loaded.rng_seed == ds.rng_seed);
    CHECK(loaded.rng_name == ds.rng_name);
}

TEST_CASE("pair file loader rejects malformed content") {
    testutil::TempDir tmp("probefp_pairs");
    const auto path = tmp.path / "bad.txt";
    {
        std::ofstream out(path);
        out << "# probefp pairs v1\nseed=1\n0,0,+1\n";
    }
    CHECK_THROWS_WITH_AS(load_pairs(path), doctest::Contains("malformed"), Error);
    {
        std::ofstream out(path);
        out << "just some text\n";
    }
    CHECK_THROWS_AS(load_pairs(path), Error);
}
