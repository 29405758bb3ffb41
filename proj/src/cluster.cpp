#include "probefp/cluster.hpp"

#include <ostream>

#include "probefp/errors.hpp"

namespace probefp {

ClusteringRun cluster_stream(std::span<const Fingerprint> fingerprints, int tau) {
    ClusteringRun run;
    run.tau = tau;
    run.assignment.reserve(fingerprints.size());

    for (std::size_t n = 0; n < fingerprints.size(); ++n) {
        const Fingerprint& fp = fingerprints[n];
        int best_id = -1;
        int best_distance = 0;
        for (const Cluster& cluster : run.clusters) {
            const int d = hamming(fp, cluster.representative);
            if (d < tau && (best_id < 0 || d < best_distance)) {
                best_id = cluster.id;
                best_distance = d;
            }
        }
        if (best_id < 0) {
            Cluster fresh;
            fresh.id = static_cast<int>(run.clusters.size());
            fresh.representative = fp;
            best_id = fresh.id;
            run.clusters.push_back(std::move(fresh));
        }
        Cluster& target = run.clusters[static_cast<std::size_t>(best_id)];
        ++target.member_count;
        target.members.push_back(static_cast<int>(n));
        run.assignment.push_back(best_id);
    }
    return run;
}

int count_devices(const ClusteringRun& run) {
    return static_cast<int>(run.clusters.size());
}

void write_assignment_csv(std::ostream& out, const ClusteringRun& run) {
    out << "input_index,cluster_id\n";
    for (std::size_t n = 0; n < run.assignment.size(); ++n) {
        out << n << "," << run.assignment[n] << "\n";
    }
}

nlohmann::json cluster_summary(const ClusteringRun& run) {
    nlohmann::json sizes = nlohmann::json::array();
    for (const Cluster& cluster : run.clusters) {
        sizes.push_back(cluster.member_count);
    }
    return {
        {"tau", run.tau},
        {"cluster_count", count_devices(run)},
        {"sizes", std::move(sizes)},
    };
}

}  // namespace probefp
