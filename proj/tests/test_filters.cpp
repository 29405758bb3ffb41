#include <doctest.h>

#include <random>
#include <set>

#include "probefp/errors.hpp"
#include "probefp/filters.hpp"
#include "testutil.hpp"

using namespace probefp;

TEST_CASE("bank enumeration counts windows per kind and length") {
    BankParams params;

    params.lengths = {8};
    params.kinds = {FilterKind::D};
    CHECK(generate_bank(params).size() == 223);

    params.lengths = {16};
    params.kinds = {FilterKind::A};
    CHECK(generate_bank(params).size() == 222);

    params = BankParams{};  // defaults: lengths {4,8,16}, stride 8, kinds A-D
    CHECK(generate_bank(params).size() == 2672);
}

TEST_CASE("bank enumeration is deterministic, ordered and duplicate-free") {
    const FilterBank bank = generate_bank(BankParams{});
    const FilterBank again = generate_bank(BankParams{});
    CHECK(bank.filters == again.filters);

    std::set<std::tuple<int, int, int>> seen;
    for (const BitmaskFilter& f : bank.filters) {
        CHECK(f.prefix >= 0);
        CHECK(f.prefix + f.length <= kProbeVectorBits);
        CHECK(f.suffix() == kProbeVectorBits - f.prefix - f.length);
        CHECK(seen.insert({static_cast<int>(f.kind), f.length, f.prefix}).second);
    }
}

TEST_CASE("bank generation rejects bad parameters") {
    BankParams params;
    params.stride = 0;
    CHECK_THROWS_AS(generate_bank(params), Error);

    params = BankParams{};
    params.lengths = {3};
    params.kinds = {FilterKind::A};
    CHECK_THROWS_AS(generate_bank(params), Error);  // A/B need an even window

    params.kinds = {FilterKind::C};
    CHECK(generate_bank(params).size() > 0);  // odd windows are fine for C/D
}

TEST_CASE("responses on hand-built windows") {
    ProbeVector x;

    SUBCASE("kind D, all-zero window") {
        CHECK(response(BitmaskFilter{FilterKind::D, 8, 0}, x) == 0);
    }
    SUBCASE("kind C, all-one window") {
        x.bytes[0] = 0xff;
        CHECK(response(BitmaskFilter{FilterKind::C, 8, 0}, x) == -8);
    }
    SUBCASE("kind A, ones then zeros") {
        x.bytes[0] = 0xff;  // bits 0..7 set, 8..15 clear
        CHECK(response(BitmaskFilter{FilterKind::A, 16, 0}, x) == 8);
    }
}

TEST_CASE("response identities against the mask oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const ProbeVector x = testutil::random_vector(rng);
        const int length = std::vector<int>{4, 8, 16}[trial % 3];
        const int prefix = static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                kProbeVectorBits - length + 1));

        const BitmaskFilter a{FilterKind::A, length, prefix};
        const BitmaskFilter b{FilterKind::B, length, prefix};
        const BitmaskFilter c{FilterKind::C, length, prefix};
        const BitmaskFilter d{FilterKind::D, length, prefix};

        for (const BitmaskFilter& f : {a, b, c, d}) {
            CHECK(response(f, x) == testutil::oracle_response(f, x));
            CHECK(response(f, x) >= min_response(f));
            CHECK(response(f, x) <= max_response(f));
        }
        CHECK(response(a, x) == -response(b, x));
        CHECK(response(c, x) == -response(d, x));

        int popcount = 0;
        for (int k = 0; k < length; ++k) popcount += x.bit(prefix + k);
        CHECK(response(d, x) == popcount);

        const BitmaskFilter first_half{FilterKind::D, length / 2, prefix};
        const BitmaskFilter second_half{FilterKind::D, length / 2, prefix + length / 2};
        CHECK(response(a, x) == response(first_half, x) - response(second_half, x));
    }
}

TEST_CASE("response matrix matches scalar responses") {
    std::mt19937_64 rng(11);
    std::vector<ProbeVector> xs;
    for (int n = 0; n < 5; ++n) xs.push_back(testutil::random_vector(rng));

    BankParams params;
    params.lengths = {4, 8};
    params.stride = 128;
    const FilterBank bank = generate_bank(params);
    const ResponseMatrix m = response_matrix(bank, xs);

    REQUIRE(m.rows() == 5);
    REQUIRE(m.cols() == bank.size());
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            CHECK(static_cast<int>(m(n, i)) ==
                  response(bank.filters[static_cast<std::size_t>(i)],
                           xs[static_cast<std::size_t>(n)]));
        }
    }

    SUBCASE("all-zero vectors give all-zero responses") {
        const std::vector<ProbeVector> zeros(3);
        CHECK(response_matrix(bank, zeros).cwiseAbs().maxCoeff() == 0);
    }
}
