#include "probefp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <unordered_map>

#include "probefp/errors.hpp"
#include "rng_util.hpp"

namespace probefp {

namespace {

// Fingerprints only the vectors the pairs reference, keyed by vector index.
std::unordered_map<std::int32_t, Fingerprint> fingerprint_referenced(
    const FingerprintModel& model, std::span<const ProbeVector> vectors,
    std::span<const LabeledPair> pairs) {
    std::unordered_map<std::int32_t, Fingerprint> fps;
    for (const LabeledPair& p : pairs) {
        for (std::int32_t idx : {p.a, p.b}) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= vectors.size()) {
                throw evaluation_error("pair references vector " + std::to_string(idx) +
                                       " outside the dataset of " +
                                       std::to_string(vectors.size()));
            }
            if (!fps.contains(idx)) {
                fps.emplace(idx, fingerprint(model, vectors[static_cast<std::size_t>(idx)]));
            }
        }
    }
    return fps;
}

double entropy_nats(const std::map<int, int>& counts, double total) {
    double h = 0.0;
    for (const auto& [key, n] : counts) {
        if (n > 0) {
            const double p = n / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

std::vector<RocPoint> roc_curve(const FingerprintModel& model,
                                std::span<const ProbeVector> vectors,
                                const PairDataset& test_pairs) {
    const int n_positive = test_pairs.count_with_label(+1);
    const int n_negative = test_pairs.count_with_label(-1);
    if (n_positive == 0 || n_negative == 0) {
        throw evaluation_error("ROC needs both classes in the test set, got " +
                               std::to_string(n_positive) + " positive / " +
                               std::to_string(n_negative) + " negative pairs");
    }

    const auto fps = fingerprint_referenced(model, vectors, test_pairs.pairs);
    const int bits = model.bits();

    // Histogram of pair distances per class; a pair matches at threshold tau
    // iff its distance is < tau.
    std::vector<int> positive_at(static_cast<std::size_t>(bits) + 1, 0);
    std::vector<int> negative_at(static_cast<std::size_t>(bits) + 1, 0);
    for (const LabeledPair& p : test_pairs.pairs) {
        const int d = hamming(fps.at(p.a), fps.at(p.b));
        (p.y == +1 ? positive_at : negative_at)[static_cast<std::size_t>(d)] += 1;
    }

    std::vector<RocPoint> curve;
    curve.reserve(static_cast<std::size_t>(bits) + 2);
    int tp = 0;
    int fp = 0;
    for (int tau = 0; tau <= bits + 1; ++tau) {
        if (tau > 0) {
            tp += positive_at[static_cast<std::size_t>(tau - 1)];
            fp += negative_at[static_cast<std::size_t>(tau - 1)];
        }
        curve.push_back(RocPoint{tau, static_cast<double>(tp) / n_positive,
                                 static_cast<double>(fp) / n_negative});
    }
    return curve;
}

int optimal_tau(std::span<const RocPoint> curve) {
    if (curve.empty()) {
        throw evaluation_error("cannot pick a threshold from an empty ROC curve");
    }
    const RocPoint* best = nullptr;
    double best_d2 = 0.0;
    for (const RocPoint& point : curve) {
        const double d2 = point.fpr * point.fpr + (1.0 - point.tpr) * (1.0 - point.tpr);
        if (best == nullptr || d2 < best_d2 || (d2 == best_d2 && point.tau < best->tau)) {
            best = &point;
            best_d2 = d2;
        }
    }
    return best->tau;
}

void write_roc_csv(std::ostream& out, std::span<const RocPoint> curve) {
    out << "tau,tpr,fpr\n";
    out << std::setprecision(10);
    for (const RocPoint& point : curve) {
        out << point.tau << "," << point.tpr << "," << point.fpr << "\n";
    }
}

ClusterQuality clustering_quality(std::span<const int> assignment,
                                  std::span<const std::string> truth) {
    if (assignment.size() != truth.size()) {
        throw evaluation_error("assignment and truth lengths differ: " +
                               std::to_string(assignment.size()) + " vs " +
                               std::to_string(truth.size()));
    }
    if (assignment.empty()) {
        throw evaluation_error("cannot score an empty clustering");
    }
    const double total = static_cast<double>(assignment.size());

    // Dense relabeling of the truth strings, then joint counts.
    std::map<std::string, int> truth_ids;
    std::vector<int> truth_of(assignment.size());
    for (std::size_t n = 0; n < truth.size(); ++n) {
        truth_of[n] = truth_ids.try_emplace(truth[n], static_cast<int>(truth_ids.size()))
                          .first->second;
    }
    std::map<int, int> cluster_counts;
    std::map<int, int> class_counts;
    std::map<std::pair<int, int>, int> joint;
    for (std::size_t n = 0; n < assignment.size(); ++n) {
        ++cluster_counts[assignment[n]];
        ++class_counts[truth_of[n]];
        ++joint[{assignment[n], truth_of[n]}];
    }

    const double h_truth = entropy_nats(class_counts, total);
    const double h_clusters = entropy_nats(cluster_counts, total);
    double h_truth_given_clusters = 0.0;
    double h_clusters_given_truth = 0.0;
    for (const auto& [key, n] : joint) {
        const auto& [cluster, cls] = key;
        const double p = n / total;
        h_truth_given_clusters -= p * std::log(static_cast<double>(n) / cluster_counts[cluster]);
        h_clusters_given_truth -= p * std::log(static_cast<double>(n) / class_counts[cls]);
    }

    ClusterQuality q;
    q.homogeneity = h_truth == 0.0 ? 1.0 : 1.0 - h_truth_given_clusters / h_truth;
    q.completeness = h_clusters == 0.0 ? 1.0 : 1.0 - h_clusters_given_truth / h_clusters;
    q.v_measure = q.homogeneity + q.completeness == 0.0
                      ? 0.0
                      : 2.0 * q.homogeneity * q.completeness / (q.homogeneity + q.completeness);
    q.cluster_count = static_cast<int>(cluster_counts.size());
    q.true_device_count = static_cast<int>(class_counts.size());
    return q;
}

SubsetReport subset_protocol(std::span<const ProbeVector> vectors,
                             const FingerprintModel& model, int tau, int repetitions,
                             std::uint64_t seed) {
    if (repetitions < 1) {
        throw evaluation_error("subset protocol needs at least one repetition");
    }
    std::vector<std::string> devices;
    std::unordered_map<std::string, int> device_ids;
    for (const ProbeVector& v : vectors) {
        if (device_ids.try_emplace(v.device_label, static_cast<int>(devices.size())).second) {
            devices.push_back(v.device_label);
        }
    }
    const int n_devices = static_cast<int>(devices.size());
    if (n_devices < 2) {
        throw evaluation_error("subset protocol needs at least 2 devices, got " +
                               std::to_string(n_devices));
    }

    const std::vector<Fingerprint> fps = fingerprint_all(model, vectors);

    SubsetReport report;
    report.seed = seed;
    report.tau = tau;
    std::mt19937_64 rng(seed);

    for (int p = 1; p <= n_devices - 1; ++p) {
        SubsetRow row;
        row.p = p;
        double sq_error_sum = 0.0;
        for (int rep = 0; rep < repetitions; ++rep) {
            // Draw p distinct devices via a partial Fisher-Yates pass.
            std::vector<int> pool(static_cast<std::size_t>(n_devices));
            for (int d = 0; d < n_devices; ++d) pool[static_cast<std::size_t>(d)] = d;
            std::vector<bool> chosen(static_cast<std::size_t>(n_devices), false);
            for (int k = 0; k < p; ++k) {
                const auto j = static_cast<std::size_t>(
                    detail::uniform_below(rng, static_cast<std::uint64_t>(n_devices - k)));
                std::swap(pool[static_cast<std::size_t>(k)],
                          pool[static_cast<std::size_t>(k) + j]);
                chosen[static_cast<std::size_t>(pool[static_cast<std::size_t>(k)])] = true;
            }

            std::vector<Fingerprint> stream;
            std::vector<std::string> stream_truth;
            for (std::size_t n = 0; n < vectors.size(); ++n) {
                if (chosen[static_cast<std::size_t>(device_ids.at(vectors[n].device_label))]) {
                    stream.push_back(fps[n]);
                    stream_truth.push_back(vectors[n].device_label);
                }
            }
            const ClusteringRun run = cluster_stream(stream, tau);
            ClusterQuality q = clustering_quality(run.assignment, stream_truth);

            report.cells.push_back(SubsetCell{p, rep, q});
            row.homogeneity += q.homogeneity;
            row.completeness += q.completeness;
            row.v_measure += q.v_measure;
            row.mean_cluster_count += q.cluster_count;
            const double err = q.cluster_count - p;
            sq_error_sum += err * err;
        }
        row.homogeneity /= repetitions;
        row.completeness /= repetitions;
        row.v_measure /= repetitions;
        row.mean_cluster_count /= repetitions;
        row.rmse = std::sqrt(sq_error_sum / repetitions);
        report.per_p.push_back(row);
    }

    for (const SubsetRow& row : report.per_p) {
        report.homogeneity_avg += row.homogeneity;
        report.completeness_avg += row.completeness;
        report.v_measure_avg += row.v_measure;
        report.rmse_avg += row.rmse;
    }
    const auto n_rows = static_cast<double>(report.per_p.size());
    report.homogeneity_avg /= n_rows;
    report.completeness_avg /= n_rows;
    report.v_measure_avg /= n_rows;
    report.rmse_avg /= n_rows;
    return report;
}

void write_subset_csv(std::ostream& out, const SubsetReport& report) {
    out << "p,repetition,homogeneity,completeness,v_measure,cluster_count\n";
    out << std::setprecision(10);
    for (const SubsetCell& cell : report.cells) {
        out << cell.p << "," << cell.repetition << "," << cell.quality.homogeneity << ","
            << cell.quality.completeness << "," << cell.quality.v_measure << ","
            << cell.quality.cluster_count << "\n";
    }
}

nlohmann::json subset_summary(const SubsetReport& report, int fingerprint_bits) {
    nlohmann::json per_p = nlohmann::json::array();
    for (const SubsetRow& row : report.per_p) {
        per_p.push_back({
            {"p", row.p},
            {"homogeneity", row.homogeneity},
            {"completeness", row.completeness},
            {"v_measure", row.v_measure},
            {"mean_cluster_count", row.mean_cluster_count},
            {"rmse", row.rmse},
        });
    }
    return {
        {"v_measure_avg", report.v_measure_avg},
        {"homogeneity_avg", report.homogeneity_avg},
        {"completeness_avg", report.completeness_avg},
        {"rmse_avg", report.rmse_avg},
        {"memory_bits_per_probe", fingerprint_bits},
        {"compression_ratio", compression_ratio_display(fingerprint_bits)},
        {"tau", report.tau},
        {"seed", report.seed},
        {"repetitions",
         report.per_p.empty() ? 0 : static_cast<int>(report.cells.size() / report.per_p.size())},
        {"per_p", std::move(per_p)},
    };
}

}  // namespace probefp
