#include "probefp/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "probefp/errors.hpp"
#include "rng_util.hpp"

namespace probefp {

using detail::shuffle_values;
using detail::uniform_below;

namespace {

std::uint64_t encode_pair(std::int32_t a, std::int32_t b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32 |
           static_cast<std::uint32_t>(b);
}

struct DeviceGroup {
    std::string label;
    std::vector<std::int32_t> members;  // vector indices, dataset order
};

std::vector<DeviceGroup> group_by_device(std::span<const ProbeVector> vectors) {
    std::vector<DeviceGroup> groups;
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const std::string& label = vectors[i].device_label;
        auto [it, inserted] = index_of.try_emplace(label, groups.size());
        if (inserted) {
            groups.push_back(DeviceGroup{label, {}});
        }
        groups[it->second].members.push_back(static_cast<std::int32_t>(i));
    }
    return groups;
}

LabeledPair make_pair(std::int32_t a, std::int32_t b, int y) {
    if (a > b) std::swap(a, b);
    return LabeledPair{a, b, y};
}

}  // namespace

int PairDataset::count_with_label(int y) const {
    return static_cast<int>(
        std::count_if(pairs.begin(), pairs.end(), [y](const LabeledPair& p) { return p.y == y; }));
}

PairDataset build_pairs(std::span<const ProbeVector> vectors, int n_matching,
                        std::uint64_t seed) {
    if (n_matching < 1) {
        throw training_error("matching pair count must be >= 1");
    }
    const std::vector<DeviceGroup> groups = group_by_device(vectors);

    std::uint64_t matching_capacity = 0;
    for (const DeviceGroup& g : groups) {
        const std::uint64_t k = g.members.size();
        matching_capacity += k * (k - 1) / 2;
    }
    if (matching_capacity < static_cast<std::uint64_t>(n_matching)) {
        throw training_error("cannot build " + std::to_string(n_matching) +
                             " matching pairs; only " + std::to_string(matching_capacity) +
                             " distinct same-device pairs exist");
    }
    std::uint64_t cross_capacity = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            cross_capacity += static_cast<std::uint64_t>(groups[i].members.size()) *
                              groups[j].members.size();
        }
    }
    if (cross_capacity < static_cast<std::uint64_t>(n_matching)) {
        throw training_error("cannot build " + std::to_string(n_matching) +
                             " non-matching pairs; only " + std::to_string(cross_capacity) +
                             " distinct cross-device pairs exist");
    }

    std::mt19937_64 rng(seed);
    PairDataset ds;
    ds.rng_seed = seed;
    std::set<std::uint64_t> used;

    // Matching pairs: visit devices round-robin so no single chatty device
    // dominates the positive set; draw uniformly within the device.
    {
        struct DeviceState {
            const DeviceGroup* group;
            std::uint64_t capacity;
            std::uint64_t used = 0;
        };
        std::vector<DeviceState> states;
        for (const DeviceGroup& g : groups) {
            const std::uint64_t k = g.members.size();
            if (k >= 2) states.push_back(DeviceState{&g, k * (k - 1) / 2});
        }
        int produced = 0;
        std::size_t turn = 0;
        while (produced < n_matching) {
            DeviceState& st = states[turn % states.size()];
            ++turn;
            if (st.used == st.capacity) continue;
            const std::vector<std::int32_t>& members = st.group->members;
            const std::uint64_t k = members.size();

            std::int32_t a = -1;
            std::int32_t b = -1;
            bool found = false;
            for (int attempt = 0; attempt < 64 && !found; ++attempt) {
                const std::uint64_t ra = uniform_below(rng, k);
                std::uint64_t rb = uniform_below(rng, k - 1);
                if (rb >= ra) ++rb;
                a = members[ra];
                b = members[rb];
                found = !used.contains(encode_pair(a, b));
            }
            if (!found) {
                // Nearly exhausted device: enumerate what is left and draw
                // uniformly from it.
                std::vector<std::pair<std::int32_t, std::int32_t>> remaining;
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = i + 1; j < k; ++j) {
                        if (!used.contains(encode_pair(members[i], members[j]))) {
                            remaining.emplace_back(members[i], members[j]);
                        }
                    }
                }
                const auto& choice = remaining[uniform_below(rng, remaining.size())];
                a = choice.first;
                b = choice.second;
            }
            used.insert(encode_pair(a, b));
            ++st.used;
            ds.pairs.push_back(make_pair(a, b, +1));
            ++produced;
        }
    }

    // Non-matching pairs: device pair uniform among those not yet exhausted,
    // then one uniform vector from each side.
    {
        struct CrossState {
            const DeviceGroup* left;
            const DeviceGroup* right;
            std::uint64_t capacity;
            std::uint64_t used = 0;
        };
        std::vector<CrossState> states;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (std::size_t j = i + 1; j < groups.size(); ++j) {
                states.push_back(CrossState{
                    &groups[i], &groups[j],
                    static_cast<std::uint64_t>(groups[i].members.size()) *
                        groups[j].members.size()});
            }
        }
        int produced = 0;
        while (produced < n_matching) {
            const std::size_t open =
                static_cast<std::size_t>(std::count_if(states.begin(), states.end(),
                                                       [](const CrossState& st) {
                                                           return st.used < st.capacity;
                                                       }));
            std::uint64_t pick = uniform_below(rng, open);
            CrossState* st = nullptr;
            for (CrossState& candidate : states) {
                if (candidate.used == candidate.capacity) continue;
                if (pick-- == 0) {
                    st = &candidate;
                    break;
                }
            }
            const std::vector<std::int32_t>& left = st->left->members;
            const std::vector<std::int32_t>& right = st->right->members;

            std::int32_t a = -1;
            std::int32_t b = -1;
            bool found = false;
            for (int attempt = 0; attempt < 64 && !found; ++attempt) {
                a = left[uniform_below(rng, left.size())];
                b = right[uniform_below(rng, right.size())];
                found = !used.contains(encode_pair(a, b));
            }
            if (!found) {
                std::vector<std::pair<std::int32_t, std::int32_t>> remaining;
                for (std::int32_t va : left) {
                    for (std::int32_t vb : right) {
                        if (!used.contains(encode_pair(va, vb))) {
                            remaining.emplace_back(va, vb);
                        }
                    }
                }
                const auto& choice = remaining[uniform_below(rng, remaining.size())];
                a = choice.first;
                b = choice.second;
            }
            used.insert(encode_pair(a, b));
            ++st->used;
            ds.pairs.push_back(make_pair(a, b, -1));
            ++produced;
        }
    }
    return ds;
}

std::pair<PairDataset, PairDataset> split(const PairDataset& ds, double train_fraction,
                                          std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw training_error("train fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        (ds.pairs[i].y == +1 ? positive : negative).push_back(i);
    }
    if (positive.size() < 2 || negative.size() < 2) {
        throw training_error("split needs at least 2 pairs per class, got " +
                             std::to_string(positive.size()) + " positive / " +
                             std::to_string(negative.size()) + " negative");
    }

    std::mt19937_64 rng(seed);
    shuffle_values(positive, rng);
    shuffle_values(negative, rng);

    const auto take = [train_fraction](std::size_t n) {
        auto want = static_cast<std::size_t>(std::lround(static_cast<double>(n) * train_fraction));
        return std::clamp<std::size_t>(want, 1, n - 1);
    };
    const std::size_t train_pos = take(positive.size());
    const std::size_t train_neg = take(negative.size());

    PairDataset train;
    PairDataset test;
    train.rng_seed = test.rng_seed = seed;
    train.rng_name = test.rng_name = ds.rng_name;

    std::vector<std::size_t> train_idx(positive.begin(), positive.begin() + train_pos);
    train_idx.insert(train_idx.end(), negative.begin(), negative.begin() + train_neg);
    std::vector<std::size_t> test_idx(positive.begin() + train_pos, positive.end());
    test_idx.insert(test_idx.end(), negative.begin() + train_neg, negative.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    for (std::size_t i : train_idx) train.pairs.push_back(ds.pairs[i]);
    for (std::size_t i : test_idx) test.pairs.push_back(ds.pairs[i]);
    return {std::move(train), std::move(test)};
}

void save_pairs(const std::filesystem::path& path, const PairDataset& ds) {
    std::ofstream out(path);
    if (!out) {
        throw ingest_error("cannot open pair file for writing: " + path.string());
    }
    out << "# probefp pairs v1\n";
    out << "seed=" << ds.rng_seed << "\n";
    out << "rng=" << ds.rng_name << "\n";
    out << "positive=" << ds.count_with_label(+1) << "\n";
    out << "negative=" << ds.count_with_label(-1) << "\n";
    for (const LabeledPair& p : ds.pairs) {
        out << p.a << "," << p.b << "," << (p.y > 0 ? "+1" : "-1") << "\n";
    }
    if (!out) {
        throw ingest_error("write failed: " + path.string());
    }
}

PairDataset load_pairs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ingest_error("cannot open pair file: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "# probefp pairs v1") {
        throw ingest_error("not a pair file: " + path.string());
    }
    PairDataset ds;
    long expected_positive = -1;
    long expected_negative = -1;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (const auto eq = line.find('='); eq != std::string::npos &&
                                            line.find(',') == std::string::npos) {
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key == "seed") ds.rng_seed = std::stoull(value);
            else if (key == "rng") ds.rng_name = value;
            else if (key == "positive") expected_positive = std::stol(value);
            else if (key == "negative") expected_negative = std::stol(value);
            continue;
        }
        LabeledPair p;
        char c1 = 0;
        char c2 = 0;
        std::istringstream row(line);
        if (!(row >> p.a >> c1 >> p.b >> c2 >> p.y) || c1 != ',' || c2 != ',' ||
            (p.y != 1 && p.y != -1) || p.a < 0 || p.b < 0 || p.a == p.b) {
            throw ingest_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed pair row '" + line + "'");
        }
        ds.pairs.push_back(p);
    }
    if (expected_positive >= 0 && ds.count_with_label(+1) != expected_positive) {
        throw ingest_error(path.string() + ": positive count mismatch");
    }
    if (expected_negative >= 0 && ds.count_with_label(-1) != expected_negative) {
        throw ingest_error(path.string() + ": negative count mismatch");
    }
    return ds;
}

}  // namespace probefp
