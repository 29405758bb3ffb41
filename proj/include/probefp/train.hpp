#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "probefp/filters.hpp"
#include "probefp/model.hpp"
#include "probefp/pairs.hpp"

namespace probefp {

// Candidate thresholds swept per filter; strictly increasing integers.
struct ThresholdSet {
    std::vector<int> values;

    static ThresholdSet range(int lo, int hi);  // inclusive
    void validate() const;
};

struct TrainingState {
    Eigen::ArrayXd weights;  // one per pair, positive mass normalised to 1
    int round = 0;
    std::vector<WeakClassifier> selected;
};

struct TrainOptions {
    int rounds = 16;  // fingerprint bits M
    ThresholdSet thresholds = ThresholdSet::range(-15, 15);
    bool forbid_reselection = false;  // never pick the same (filter, threshold) twice
    int threads = 1;
    // Called after each round's weight normalisation.
    std::function<void(const TrainingState&)> round_observer;
    std::ostream* progress = nullptr;  // per-round log mirroring the model columns
};

// Pairwise weak classifier: +1 when both responses fall on the same side of
// the threshold (side membership is response > t), -1 otherwise.
int pair_classifier_output(int response_a, int response_b, int threshold);

// Sum of the weights of the pairs the (filter, threshold) classifier gets
// wrong. `responses` is indexed by the vector indices the pairs refer to.
double weighted_error(const ResponseMatrix& responses, std::span<const LabeledPair> pairs,
                      const Eigen::ArrayXd& weights, int filter_index, int threshold);

// Asymmetric pairwise boosting: runs `rounds` rounds of exhaustive
// (filter, threshold) error minimisation with deterministic tie-breaking
// (lowest filter index, then lowest threshold), updating and renormalising
// the weights of positive pairs only. The result is independent of
// `threads`.
FingerprintModel train(std::span<const ProbeVector> vectors, const PairDataset& train_pairs,
                       const FilterBank& bank, const TrainOptions& options);

}  // namespace probefp
