#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "probefp/fingerprint.hpp"

namespace probefp {

struct Cluster {
    int id = 0;
    Fingerprint representative;  // first member's fingerprint, fixed at creation
    int member_count = 0;
    std::vector<int> members;  // input indices, for evaluation
};

struct ClusteringRun {
    std::vector<Cluster> clusters;  // ids dense from 0, creation order
    int tau = 0;
    std::vector<int> assignment;  // one cluster id per input
};

// Online clustering: the first fingerprint opens cluster 0; each following
// fingerprint joins the nearest representative with Hamming distance < tau
// (ties to the lowest cluster id) or opens a new cluster.
ClusteringRun cluster_stream(std::span<const Fingerprint> fingerprints, int tau);

int count_devices(const ClusteringRun& run);

// CSV with header "input_index,cluster_id".
void write_assignment_csv(std::ostream& out, const ClusteringRun& run);
// {"tau", "cluster_count", "sizes"}
nlohmann::json cluster_summary(const ClusteringRun& run);

}  // namespace probefp
