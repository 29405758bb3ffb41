#include "probefp/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "probefp/errors.hpp"

namespace probefp {

namespace {

// Doubles round-trip exactly through 17 significant decimal digits.
std::string decimal17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_decimal(const nlohmann::json& v, const char* field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        char* end = nullptr;
        const double parsed = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !std::isfinite(parsed)) {
            throw ingest_error(std::string("model field '") + field +
                               "' is not a finite decimal: '" + s + "'");
        }
        return parsed;
    }
    throw ingest_error(std::string("model field '") + field + "' must be a number or string");
}

}  // namespace

nlohmann::json model_to_json(const FingerprintModel& model) {
    nlohmann::json classifiers = nlohmann::json::array();
    for (const WeakClassifier& c : model.classifiers) {
        classifiers.push_back({
            {"kind", std::string(1, kind_name(c.filter.kind))},
            {"L", c.filter.length},
            {"P", c.filter.prefix},
            {"t", c.threshold},
            {"confidence", decimal17(c.confidence)},
            {"epsilon", decimal17(c.training_error)},
            {"filter_index", c.filter_index},
        });
    }
    return {
        {"version", model.format_version},
        {"M", model.bits()},
        {"classifiers", std::move(classifiers)},
        {"metadata", model.metadata},
    };
}

FingerprintModel model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("version")) {
        throw ingest_error("not a fingerprint model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
        throw ingest_error("unsupported model version " + std::to_string(version) +
                           " (supported: " + std::to_string(kModelFormatVersion) + ")");
    }
    FingerprintModel model;
    model.format_version = version;
    if (doc.contains("metadata")) model.metadata = doc.at("metadata");

    const auto& classifiers = doc.at("classifiers");
    if (!classifiers.is_array() || classifiers.empty()) {
        throw ingest_error("model has no classifiers");
    }
    for (const auto& entry : classifiers) {
        WeakClassifier c;
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind.size() != 1) {
            throw ingest_error("model classifier kind must be one of A, B, C, D");
        }
        c.filter.kind = kind_from_name(kind[0]);
        c.filter.length = entry.at("L").get<int>();
        c.filter.prefix = entry.at("P").get<int>();
        c.threshold = entry.at("t").get<int>();
        c.confidence = parse_decimal(entry.at("confidence"), "confidence");
        if (entry.contains("epsilon")) {
            c.training_error = parse_decimal(entry.at("epsilon"), "epsilon");
        }
        if (entry.contains("filter_index")) {
            c.filter_index = entry.at("filter_index").get<int>();
        }
        if (c.filter.length < 1 || c.filter.prefix < 0 ||
            c.filter.prefix + c.filter.length > kProbeVectorBits) {
            throw ingest_error("model classifier window [" + std::to_string(c.filter.prefix) +
                               ", +" + std::to_string(c.filter.length) +
                               ") falls outside the 1784-bit vector");
        }
        model.classifiers.push_back(std::move(c));
    }
    if (static_cast<std::size_t>(doc.at("M").get<int>()) != model.classifiers.size()) {
        throw ingest_error("model M does not match the classifier count");
    }
    return model;
}

void save_model(const std::filesystem::path& path, const FingerprintModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw ingest_error("cannot open model file for writing: " + path.string());
    }
    out << model_to_json(model).dump(2) << "\n";
    if (!out) {
        throw ingest_error("write failed: " + path.string());
    }
}

FingerprintModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ingest_error("cannot open model file: " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ingest_error("corrupt model file " + path.string() + ": " + e.what());
    }
    try {
        return model_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ingest_error("corrupt model file " + path.string() + ": " + e.what());
    }
}

}  // namespace probefp
