#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "probefp/filters.hpp"

namespace probefp {

inline constexpr int kModelFormatVersion = 1;

// One boosting round's pick: a filter, the threshold applied to its
// response, and the confidence ln((1-eps)/eps) earned on the training pairs.
struct WeakClassifier {
    int filter_index = -1;  // index into the bank the model was trained from
    BitmaskFilter filter;
    int threshold = 0;
    double confidence = 0.0;
    double training_error = 0.0;

    friend bool operator==(const WeakClassifier&, const WeakClassifier&) = default;
};

// Ordered list of the M selected weak classifiers plus provenance metadata.
// Selection order is preserved; descending confidence is reconstructible
// from the stored values.
struct FingerprintModel {
    int format_version = kModelFormatVersion;
    std::vector<WeakClassifier> classifiers;
    nlohmann::json metadata = nlohmann::json::object();

    int bits() const { return static_cast<int>(classifiers.size()); }
};

// Versioned JSON document. Confidence and training error round-trip at full
// precision (decimal strings with 17 significant digits).
nlohmann::json model_to_json(const FingerprintModel& model);
FingerprintModel model_from_json(const nlohmann::json& doc);

void save_model(const std::filesystem::path& path, const FingerprintModel& model);
FingerprintModel load_model(const std::filesystem::path& path);

}  // namespace probefp
