#include "probefp/train.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>
#include <vector>

#include "probefp/dissect.hpp"
#include "probefp/errors.hpp"
#include "probefp/log.hpp"

namespace probefp {

namespace {

constexpr double kEpsilonClamp = 1e-6;

struct SweepBest {
    double error = std::numeric_limits<double>::infinity();
    int filter_index = -1;
    int threshold_index = -1;

    // Lowest error wins; ties go to the lowest filter index, then the
    // lowest threshold.
    bool better_than(const SweepBest& other) const {
        if (error != other.error) return error < other.error;
        if (filter_index != other.filter_index) return filter_index < other.filter_index;
        return threshold_index < other.threshold_index;
    }
};

}  // namespace

ThresholdSet ThresholdSet::range(int lo, int hi) {
    if (lo > hi) {
        throw training_error("threshold range is empty");
    }
    ThresholdSet set;
    set.values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int t = lo; t <= hi; ++t) set.values.push_back(t);
    return set;
}

void ThresholdSet::validate() const {
    if (values.empty()) {
        throw training_error("threshold set is empty");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            throw training_error("threshold set must be strictly increasing");
        }
    }
}

int pair_classifier_output(int response_a, int response_b, int threshold) {
    return (response_a > threshold) == (response_b > threshold) ? +1 : -1;
}

double weighted_error(const ResponseMatrix& responses, std::span<const LabeledPair> pairs,
                      const Eigen::ArrayXd& weights, int filter_index, int threshold) {
    double error = 0.0;
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const LabeledPair& pair = pairs[n];
        const int prediction = pair_classifier_output(responses(pair.a, filter_index),
                                                      responses(pair.b, filter_index), threshold);
        if (prediction != pair.y) {
            error += weights[static_cast<Eigen::Index>(n)];
        }
    }
    return error;
}

FingerprintModel train(std::span<const ProbeVector> vectors, const PairDataset& train_pairs,
                       const FilterBank& bank, const TrainOptions& options) {
    const int n_pairs = static_cast<int>(train_pairs.pairs.size());
    const int n_filters = bank.size();
    options.thresholds.validate();
    if (options.rounds < 1) {
        throw training_error("round count must be >= 1");
    }
    if (options.rounds >= n_filters) {
        throw training_error("round count " + std::to_string(options.rounds) +
                             " must be smaller than the bank size " + std::to_string(n_filters));
    }
    if (n_pairs == 0) {
        throw training_error("training pair set is empty");
    }
    bool has_positive = false;
    for (const LabeledPair& p : train_pairs.pairs) {
        if (p.a == p.b || p.a < 0 || p.b < 0 ||
            std::max(p.a, p.b) >= static_cast<std::int32_t>(vectors.size())) {
            throw training_error("pair (" + std::to_string(p.a) + ", " + std::to_string(p.b) +
                                 ") references an invalid vector index");
        }
        if (p.y != +1 && p.y != -1) {
            throw training_error("pair label must be +1 or -1");
        }
        has_positive |= p.y == +1;
    }
    if (!has_positive) {
        throw training_error("training pair set has no positive pair");
    }

    // Responses are fixed across rounds: compute them once for the vectors
    // the pairs actually touch, then lay them out per pair side so each
    // filter's sweep reads two contiguous columns.
    std::unordered_map<std::int32_t, Eigen::Index> compact;
    std::vector<const ProbeVector*> touched;
    for (const LabeledPair& p : train_pairs.pairs) {
        for (std::int32_t idx : {p.a, p.b}) {
            if (compact.try_emplace(idx, static_cast<Eigen::Index>(touched.size())).second) {
                touched.push_back(&vectors[static_cast<std::size_t>(idx)]);
            }
        }
    }
    ResponseMatrix responses(static_cast<Eigen::Index>(touched.size()),
                             static_cast<Eigen::Index>(n_filters));
    for (Eigen::Index r = 0; r < responses.rows(); ++r) {
        for (Eigen::Index i = 0; i < responses.cols(); ++i) {
            responses(r, i) = static_cast<std::int8_t>(
                response(bank.filters[static_cast<std::size_t>(i)], *touched[r]));
        }
    }
    ResponseMatrix side_a(n_pairs, n_filters);
    ResponseMatrix side_b(n_pairs, n_filters);
    for (int n = 0; n < n_pairs; ++n) {
        side_a.row(n) = responses.row(compact.at(train_pairs.pairs[n].a));
        side_b.row(n) = responses.row(compact.at(train_pairs.pairs[n].b));
    }

    const std::vector<int>& thresholds = options.thresholds.values;
    const int n_thresholds = static_cast<int>(thresholds.size());

    // Per filter, the contiguous run of threshold indices that yield a
    // non-constant classifier: min_response <= t < max_response.
    std::vector<std::pair<int, int>> usable(static_cast<std::size_t>(n_filters));
    bool any_usable = false;
    for (int i = 0; i < n_filters; ++i) {
        const BitmaskFilter& f = bank.filters[static_cast<std::size_t>(i)];
        const auto lo = std::lower_bound(thresholds.begin(), thresholds.end(), min_response(f));
        const auto hi = std::lower_bound(thresholds.begin(), thresholds.end(), max_response(f));
        usable[static_cast<std::size_t>(i)] = {static_cast<int>(lo - thresholds.begin()),
                                               static_cast<int>(hi - thresholds.begin())};
        any_usable |= lo < hi;
    }
    if (!any_usable) {
        throw training_error("no threshold lies inside any filter's response range");
    }

    TrainingState state;
    state.weights = Eigen::ArrayXd::Constant(n_pairs, 1.0 / n_pairs);

    std::set<std::pair<int, int>> taken;  // (filter, threshold index), when reselection is off

    // Error of the (i, p) classifier over all pairs, accumulated on a
    // difference array over the threshold axis: a pair predicts -1 exactly
    // for thresholds in [min(ra, rb), max(ra, rb)).
    const auto sweep_range = [&](int begin, int end, const Eigen::ArrayXd& weights,
                                 double negative_mass, SweepBest& best) {
        std::vector<double> diff(static_cast<std::size_t>(n_thresholds) + 1);
        for (int i = begin; i < end; ++i) {
            const auto [t_lo, t_hi] = usable[static_cast<std::size_t>(i)];
            if (t_lo >= t_hi) continue;
            std::fill(diff.begin(), diff.end(), 0.0);
            const std::int8_t* ra = side_a.col(i).data();
            const std::int8_t* rb = side_b.col(i).data();
            for (int n = 0; n < n_pairs; ++n) {
                const int lo = std::min(ra[n], rb[n]);
                const int hi = std::max(ra[n], rb[n]);
                if (lo == hi) continue;  // equal responses: always +1
                const double w =
                    train_pairs.pairs[static_cast<std::size_t>(n)].y == +1 ? weights[n] : -weights[n];
                const auto il = std::lower_bound(thresholds.begin(), thresholds.end(), lo);
                const auto ih = std::lower_bound(thresholds.begin(), thresholds.end(), hi);
                diff[static_cast<std::size_t>(il - thresholds.begin())] += w;
                diff[static_cast<std::size_t>(ih - thresholds.begin())] -= w;
            }
            double inside = 0.0;
            for (int p = 0; p < t_hi; ++p) {
                inside += diff[static_cast<std::size_t>(p)];
                if (p < t_lo) continue;
                if (options.forbid_reselection && taken.contains({i, p})) continue;
                const SweepBest candidate{negative_mass + inside, i, p};
                if (candidate.better_than(best)) best = candidate;
            }
        }
    };

    FingerprintModel model;
    const int threads = std::max(1, options.threads);

    for (int m = 1; m <= options.rounds; ++m) {
        double negative_mass = 0.0;
        for (int n = 0; n < n_pairs; ++n) {
            if (train_pairs.pairs[static_cast<std::size_t>(n)].y == -1) {
                negative_mass += state.weights[n];
            }
        }

        SweepBest best;
        if (threads == 1 || n_filters < 2 * threads) {
            sweep_range(0, n_filters, state.weights, negative_mass, best);
        } else {
            std::vector<SweepBest> partial(static_cast<std::size_t>(threads));
            std::vector<std::thread> workers;
            const int chunk = (n_filters + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                const int begin = w * chunk;
                const int end = std::min(n_filters, begin + chunk);
                workers.emplace_back([&, begin, end, w] {
                    sweep_range(begin, end, state.weights, negative_mass,
                                partial[static_cast<std::size_t>(w)]);
                });
            }
            for (auto& worker : workers) worker.join();
            for (const SweepBest& candidate : partial) {
                if (candidate.filter_index >= 0 && candidate.better_than(best)) best = candidate;
            }
        }
        if (best.filter_index < 0) {
            throw training_error("round " + std::to_string(m) +
                                 ": no usable (filter, threshold) combination left");
        }

        const double epsilon = best.error;
        const double clamped = std::clamp(epsilon, kEpsilonClamp, 1.0 - kEpsilonClamp);
        const double confidence = std::log((1.0 - clamped) / clamped);
        if (epsilon >= 0.5) {
            warn("round " + std::to_string(m) + ": best weak classifier is no better than chance (error " +
                 std::to_string(epsilon) + ")");
        }

        WeakClassifier picked;
        picked.filter_index = best.filter_index;
        picked.filter = bank.filters[static_cast<std::size_t>(best.filter_index)];
        picked.threshold = thresholds[static_cast<std::size_t>(best.threshold_index)];
        picked.confidence = confidence;
        picked.training_error = epsilon;
        if (options.forbid_reselection) {
            taken.insert({best.filter_index, best.threshold_index});
        }

        // Asymmetric update: only misclassified positive pairs gain weight,
        // and only positive weights are renormalised.
        const double boost = std::exp(confidence);
        const std::int8_t* ra = side_a.col(best.filter_index).data();
        const std::int8_t* rb = side_b.col(best.filter_index).data();
        for (int n = 0; n < n_pairs; ++n) {
            const LabeledPair& pair = train_pairs.pairs[static_cast<std::size_t>(n)];
            if (pair.y != +1) continue;
            if (pair_classifier_output(ra[n], rb[n], picked.threshold) != pair.y) {
                state.weights[n] *= boost;
            }
        }
        double positive_mass = 0.0;
        for (int n = 0; n < n_pairs; ++n) {
            if (train_pairs.pairs[static_cast<std::size_t>(n)].y == +1) {
                positive_mass += state.weights[n];
            }
        }
        if (!(positive_mass > 0.0)) {
            throw training_error("round " + std::to_string(m) +
                                 ": positive pair weights vanished");
        }
        for (int n = 0; n < n_pairs; ++n) {
            if (train_pairs.pairs[static_cast<std::size_t>(n)].y == +1) {
                state.weights[n] /= positive_mass;
            }
        }

        state.round = m;
        state.selected.push_back(picked);
        model.classifiers.push_back(picked);

        if (options.progress != nullptr) {
            *options.progress << "round " << m << ": kind=" << kind_name(picked.filter.kind)
                              << " L=" << picked.filter.length << " P=" << picked.filter.prefix
                              << " t=" << picked.threshold << " eps=" << epsilon
                              << " c=" << confidence << " ie=\""
                              << segment_label(picked.filter.prefix, picked.filter.length)
                              << "\"\n";
        }
        if (options.round_observer) {
            options.round_observer(state);
        }
    }

    model.metadata["bank"] = {
        {"lengths", bank.params.lengths},
        {"stride", bank.params.stride},
        {"kinds", [&] {
             std::string kinds;
             for (FilterKind k : bank.params.kinds) kinds += kind_name(k);
             return kinds;
         }()},
        {"filters", n_filters},
    };
    model.metadata["thresholds"] = thresholds;
    model.metadata["pairs"] = {
        {"seed", train_pairs.rng_seed},
        {"rng", train_pairs.rng_name},
        {"count", n_pairs},
        {"positive", train_pairs.count_with_label(+1)},
    };
    model.metadata["rounds"] = options.rounds;
    return model;
}

}  // namespace probefp
