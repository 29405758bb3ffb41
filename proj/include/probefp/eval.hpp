#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "probefp/cluster.hpp"
#include "probefp/fingerprint.hpp"
#include "probefp/pairs.hpp"

namespace probefp {

struct RocPoint {
    int tau = 0;
    double tpr = 0.0;
    double fpr = 0.0;
};

// Sweeps tau = 0..M+1 over the test pairs with the plain Hamming predictor.
// Throws when either class is absent from the test set.
std::vector<RocPoint> roc_curve(const FingerprintModel& model,
                                std::span<const ProbeVector> vectors,
                                const PairDataset& test_pairs);

// Tau of the point closest to the (0,1) corner, ties to the smaller tau.
int optimal_tau(std::span<const RocPoint> curve);

void write_roc_csv(std::ostream& out, std::span<const RocPoint> curve);

// Entropy-based external clustering scores (natural log). v_measure is the
// harmonic mean of homogeneity and completeness.
struct ClusterQuality {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
    int cluster_count = 0;
    int true_device_count = 0;
};

ClusterQuality clustering_quality(std::span<const int> assignment,
                                  std::span<const std::string> truth);

// Random-subset device-counting protocol: for each population size
// p = 1..P-1 draw `repetitions` random p-device subsets, fingerprint and
// cluster their probes in dataset order, and aggregate the quality scores
// and the cluster-count RMSE per p plus grand averages over p.
struct SubsetCell {
    int p = 0;
    int repetition = 0;
    ClusterQuality quality;
};

struct SubsetRow {
    int p = 0;
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
    double mean_cluster_count = 0.0;
    double rmse = 0.0;
};

struct SubsetReport {
    std::vector<SubsetCell> cells;
    std::vector<SubsetRow> per_p;
    double homogeneity_avg = 0.0;
    double completeness_avg = 0.0;
    double v_measure_avg = 0.0;
    double rmse_avg = 0.0;
    std::uint64_t seed = 0;
    int tau = 0;
};

SubsetReport subset_protocol(std::span<const ProbeVector> vectors,
                             const FingerprintModel& model, int tau, int repetitions,
                             std::uint64_t seed);

// CSV with one row per (p, repetition) cell.
void write_subset_csv(std::ostream& out, const SubsetReport& report);
// Summary mirroring the averaged clustering-comparison table rows.
nlohmann::json subset_summary(const SubsetReport& report, int fingerprint_bits);

}  // namespace probefp
