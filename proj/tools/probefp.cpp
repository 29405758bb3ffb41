// Command-line front end wiring the pipeline:
//   dissect -> pairs -> train -> fingerprint -> match / cluster -> eval.
// All tunables live in a key=value config file; flags override config keys.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "probefp/cluster.hpp"
#include "probefp/dissect.hpp"
#include "probefp/errors.hpp"
#include "probefp/eval.hpp"
#include "probefp/fingerprint.hpp"
#include "probefp/model.hpp"
#include "probefp/pairs.hpp"
#include "probefp/pcap.hpp"
#include "probefp/probe_vector.hpp"
#include "probefp/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::vector<int> bank_lengths{4, 8, 16};
    int bank_stride = 8;
    std::string bank_kinds = "ABCD";
    int threshold_min = -15;
    int threshold_max = 15;
    int train_rounds = 16;
    int train_threads = 1;
    bool train_forbid_reselection = false;
    int pairs_matching = 1000;
    double pairs_train_fraction = 0.6;
    std::uint64_t pairs_seed = 1;
    int eval_tau = -1;  // -1: pick the ROC-optimal tau
    int eval_repetitions = 10;
    std::uint64_t eval_seed = 1;

    // Canonical key=value view; also the hashed content.
    std::map<std::string, std::string> as_map() const {
        std::ostringstream lengths;
        for (std::size_t i = 0; i < bank_lengths.size(); ++i) {
            lengths << (i ? "," : "") << bank_lengths[i];
        }
        std::ostringstream fraction;
        fraction << pairs_train_fraction;
        return {
            {"bank.lengths", lengths.str()},
            {"bank.stride", std::to_string(bank_stride)},
            {"bank.kinds", bank_kinds},
            {"thresholds.min", std::to_string(threshold_min)},
            {"thresholds.max", std::to_string(threshold_max)},
            {"train.rounds", std::to_string(train_rounds)},
            {"train.threads", std::to_string(train_threads)},
            {"train.forbid_reselection", train_forbid_reselection ? "true" : "false"},
            {"pairs.matching", std::to_string(pairs_matching)},
            {"pairs.train_fraction", fraction.str()},
            {"pairs.seed", std::to_string(pairs_seed)},
            {"eval.tau", std::to_string(eval_tau)},
            {"eval.repetitions", std::to_string(eval_repetitions)},
            {"eval.seed", std::to_string(eval_seed)},
        };
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        values.push_back(std::stoi(item));
    }
    return values;
}

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "bank.lengths") cfg.bank_lengths = parse_int_list(value);
        else if (key == "bank.stride") cfg.bank_stride = std::stoi(value);
        else if (key == "bank.kinds") cfg.bank_kinds = value;
        else if (key == "thresholds.min") cfg.threshold_min = std::stoi(value);
        else if (key == "thresholds.max") cfg.threshold_max = std::stoi(value);
        else if (key == "train.rounds") cfg.train_rounds = std::stoi(value);
        else if (key == "train.threads") cfg.train_threads = std::stoi(value);
        else if (key == "train.forbid_reselection") cfg.train_forbid_reselection = value == "true" || value == "1";
        else if (key == "pairs.matching") cfg.pairs_matching = std::stoi(value);
        else if (key == "pairs.train_fraction") cfg.pairs_train_fraction = std::stod(value);
        else if (key == "pairs.seed") cfg.pairs_seed = std::stoull(value);
        else if (key == "eval.tau") cfg.eval_tau = std::stoi(value);
        else if (key == "eval.repetitions") cfg.eval_repetitions = std::stoi(value);
        else if (key == "eval.seed") cfg.eval_seed = std::stoull(value);
        else throw probefp::usage_error("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw probefp::usage_error("bad value for config key '" + key + "': '" + value + "'");
    } catch (const std::out_of_range&) {
        throw probefp::usage_error("bad value for config key '" + key + "': '" + value + "'");
    }
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

void load_config_file(RunConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw probefp::usage_error("cannot open config file: " + path.string());
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw probefp::usage_error(path.string() + ":" + std::to_string(line_no) +
                                       ": expected key = value");
        }
        apply_config_key(cfg, strip(text.substr(0, eq)), strip(text.substr(eq + 1)));
    }
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_hash(const RunConfig& cfg) {
    std::string canonical;
    for (const auto& [key, value] : cfg.as_map()) {
        canonical += key + "=" + value + "\n";
    }
    return fnv1a_hex(canonical);
}

void write_manifest(const fs::path& primary_output, const std::string& subcommand,
                    const RunConfig& cfg, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const json& extra = json::object()) {
    json manifest = {
        {"tool", "probefp"},
        {"subcommand", subcommand},
        {"config_hash", config_hash(cfg)},
        {"config", cfg.as_map()},
        {"inputs", inputs},
        {"outputs", outputs},
    };
    for (const auto& [key, value] : extra.items()) {
        manifest[key] = value;
    }
    fs::path path = primary_output;
    path += ".manifest.json";
    std::ofstream out(path);
    out << manifest.dump(2) << "\n";
}

probefp::BankParams bank_params(const RunConfig& cfg) {
    probefp::BankParams params;
    params.lengths = cfg.bank_lengths;
    params.stride = cfg.bank_stride;
    params.kinds.clear();
    for (char k : cfg.bank_kinds) {
        params.kinds.push_back(probefp::kind_from_name(k));
    }
    return params;
}

probefp::TrainOptions train_options(const RunConfig& cfg, bool quiet) {
    probefp::TrainOptions options;
    options.rounds = cfg.train_rounds;
    options.thresholds = probefp::ThresholdSet::range(cfg.threshold_min, cfg.threshold_max);
    options.forbid_reselection = cfg.train_forbid_reselection;
    options.threads = cfg.train_threads;
    options.progress = quiet ? nullptr : &std::cerr;
    return options;
}

// dissect --pcap f --label l [--channel c] ... [--manifest csv] --out ds.bin
int run_dissect(const std::vector<std::string>& pcaps, const std::vector<std::string>& labels,
                const std::vector<int>& channels, const std::string& manifest_path,
                const std::string& out, const RunConfig& cfg) {
    struct Input {
        fs::path path;
        std::string label;
        int channel = 0;
    };
    std::vector<Input> inputs;
    if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) {
            throw probefp::ingest_error("cannot open capture manifest: " + manifest_path);
        }
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string text = strip(line);
            if (text.empty() || text[0] == '#') continue;
            std::istringstream row(text);
            Input input;
            std::string path_field;
            std::string channel_field;
            if (!std::getline(row, path_field, ',') || !std::getline(row, input.label, ',')) {
                throw probefp::ingest_error(manifest_path + ":" + std::to_string(line_no) +
                                            ": expected pcap_path,label[,channel]");
            }
            if (std::getline(row, channel_field, ',')) {
                input.channel = std::stoi(channel_field);
            }
            input.path = strip(path_field);
            input.label = strip(input.label);
            inputs.push_back(std::move(input));
        }
    }
    if (pcaps.size() != labels.size()) {
        throw probefp::usage_error("--pcap and --label must be given the same number of times");
    }
    for (std::size_t i = 0; i < pcaps.size(); ++i) {
        inputs.push_back(Input{pcaps[i], labels[i], i < channels.size() ? channels[i] : 0});
    }
    if (inputs.empty()) {
        throw probefp::usage_error("dissect needs at least one capture (--pcap/--label or --manifest)");
    }

    std::vector<probefp::ProbeVector> vectors;
    std::vector<std::string> input_names;
    for (const Input& input : inputs) {
        probefp::LabelMap labels_for_file;
        labels_for_file.default_label = input.label;
        labels_for_file.default_channel = input.channel;
        const probefp::RawCapture capture = probefp::load_capture(input.path, labels_for_file);
        std::vector<probefp::ProbeVector> batch = probefp::export_vectors(capture);
        vectors.insert(vectors.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
        input_names.push_back(input.path.string());
    }
    probefp::save_vectors(out, vectors);
    write_manifest(out, "dissect", cfg, input_names, {out},
                   {{"vectors", vectors.size()}, {"captures", inputs.size()}});
    std::cout << "wrote " << vectors.size() << " probe vectors from " << inputs.size()
              << " capture(s) to " << out << "\n";
    return 0;
}

int run_pairs(const std::string& dataset, const std::string& out_train,
              const std::string& out_test, const std::string& out_all, const RunConfig& cfg) {
    const std::vector<probefp::ProbeVector> vectors = probefp::load_vectors(dataset);
    const probefp::PairDataset all =
        probefp::build_pairs(vectors, cfg.pairs_matching, cfg.pairs_seed);
    const auto [train_set, test_set] = probefp::split(all, cfg.pairs_train_fraction, cfg.pairs_seed);
    if (!out_all.empty()) {
        probefp::save_pairs(out_all, all);
    }
    probefp::save_pairs(out_train, train_set);
    probefp::save_pairs(out_test, test_set);
    std::vector<std::string> outputs{out_train, out_test};
    if (!out_all.empty()) outputs.push_back(out_all);
    write_manifest(out_train, "pairs", cfg, {dataset}, outputs,
                   {{"seeds", {{"pairs", cfg.pairs_seed}}}});
    std::cout << "built " << all.pairs.size() << " pairs (train "
              << train_set.pairs.size() << ", test " << test_set.pairs.size() << ")\n";
    return 0;
}

int run_train(const std::string& dataset, const std::string& pairs_path, const std::string& out,
              bool quiet, const RunConfig& cfg) {
    const std::vector<probefp::ProbeVector> vectors = probefp::load_vectors(dataset);
    const probefp::PairDataset train_pairs = probefp::load_pairs(pairs_path);
    const probefp::FilterBank bank = probefp::generate_bank(bank_params(cfg));
    probefp::FingerprintModel model =
        probefp::train(vectors, train_pairs, bank, train_options(cfg, quiet));
    model.metadata["config_hash"] = config_hash(cfg);
    probefp::save_model(out, model);
    write_manifest(out, "train", cfg, {dataset, pairs_path}, {out},
                   {{"seeds", {{"pairs", train_pairs.rng_seed}}}});
    std::cout << "trained " << model.bits() << "-bit model over " << bank.size()
              << " candidate filters -> " << out << "\n";
    return 0;
}

int run_fingerprint(const std::string& dataset, const std::string& model_path,
                    const std::string& out, const RunConfig& cfg) {
    const std::vector<probefp::ProbeVector> vectors = probefp::load_vectors(dataset);
    const probefp::FingerprintModel model = probefp::load_model(model_path);
    const std::vector<probefp::Fingerprint> fps = probefp::fingerprint_all(model, vectors);
    probefp::save_fingerprints(out, fps);
    write_manifest(out, "fingerprint", cfg, {dataset, model_path}, {out},
                   {{"fingerprints", fps.size()}, {"bits", model.bits()}});
    std::cout << "wrote " << fps.size() << " fingerprints of " << model.bits() << " bits to "
              << out << "\n";
    return 0;
}

int run_match(const std::string& fps_path, int index_a, int index_b, int tau, bool weighted,
              const std::string& model_path, double min_score) {
    const std::vector<probefp::Fingerprint> fps = probefp::load_fingerprints(fps_path);
    if (index_a < 0 || index_b < 0 || static_cast<std::size_t>(index_a) >= fps.size() ||
        static_cast<std::size_t>(index_b) >= fps.size()) {
        throw probefp::evaluation_error("fingerprint index outside [0, " +
                                        std::to_string(fps.size()) + ")");
    }
    int label = 0;
    if (weighted) {
        if (model_path.empty()) {
            throw probefp::usage_error("--weighted needs --model for the confidences");
        }
        const probefp::FingerprintModel model = probefp::load_model(model_path);
        const double score = probefp::weighted_score(
            model, fps[static_cast<std::size_t>(index_a)], fps[static_cast<std::size_t>(index_b)]);
        label = score >= min_score ? +1 : -1;
        std::cerr << "weighted score " << score << " (match when >= " << min_score << ")\n";
    } else {
        label = probefp::predict_match(fps[static_cast<std::size_t>(index_a)],
                                       fps[static_cast<std::size_t>(index_b)], tau);
    }
    std::cout << (label > 0 ? "+1" : "-1") << "\n";
    return 0;
}

int run_cluster(const std::string& fps_path, int tau, const std::string& out_assignments,
                const std::string& out_summary, const RunConfig& cfg) {
    const std::vector<probefp::Fingerprint> fps = probefp::load_fingerprints(fps_path);
    const probefp::ClusteringRun run = probefp::cluster_stream(fps, tau);
    {
        std::ofstream out(out_assignments);
        if (!out) {
            throw probefp::evaluation_error("cannot open " + out_assignments);
        }
        out << "# config_hash=" << config_hash(cfg) << "\n";
        probefp::write_assignment_csv(out, run);
    }
    {
        std::ofstream out(out_summary);
        if (!out) {
            throw probefp::evaluation_error("cannot open " + out_summary);
        }
        json summary = probefp::cluster_summary(run);
        summary["config_hash"] = config_hash(cfg);
        out << summary.dump(2) << "\n";
    }
    write_manifest(out_assignments, "cluster", cfg, {fps_path}, {out_assignments, out_summary},
                   {{"tau", tau}, {"clusters", probefp::count_devices(run)}});
    std::cout << probefp::count_devices(run) << " clusters from " << fps.size()
              << " fingerprints at tau=" << tau << "\n";
    return 0;
}

int run_eval_roc(const std::string& dataset, const std::string& model_path,
                 const std::string& pairs_path, const std::string& out, const RunConfig& cfg) {
    const std::vector<probefp::ProbeVector> vectors = probefp::load_vectors(dataset);
    const probefp::FingerprintModel model = probefp::load_model(model_path);
    const probefp::PairDataset test_pairs = probefp::load_pairs(pairs_path);
    const std::vector<probefp::RocPoint> curve = probefp::roc_curve(model, vectors, test_pairs);
    const int best_tau = probefp::optimal_tau(curve);
    {
        std::ofstream csv(out);
        if (!csv) {
            throw probefp::evaluation_error("cannot open " + out);
        }
        csv << "# config_hash=" << config_hash(cfg) << "\n";
        probefp::write_roc_csv(csv, curve);
    }
    write_manifest(out, "eval-roc", cfg, {dataset, model_path, pairs_path}, {out},
                   {{"optimal_tau", best_tau}, {"bits", model.bits()}});
    std::cout << "optimal_tau=" << best_tau << "\n";
    return 0;
}

int run_eval_clustering(const std::string& dataset, const std::string& model_path,
                        const std::string& pairs_path, const std::string& out_table,
                        const std::string& out_summary, const RunConfig& cfg) {
    const std::vector<probefp::ProbeVector> vectors = probefp::load_vectors(dataset);
    const probefp::FingerprintModel model = probefp::load_model(model_path);

    int tau = cfg.eval_tau;
    if (tau < 0) {
        if (pairs_path.empty()) {
            throw probefp::usage_error(
                "eval.tau is unset; pass --tau or --pairs to derive the ROC-optimal tau");
        }
        const probefp::PairDataset test_pairs = probefp::load_pairs(pairs_path);
        tau = probefp::optimal_tau(probefp::roc_curve(model, vectors, test_pairs));
        std::cerr << "using ROC-optimal tau=" << tau << "\n";
    }

    const probefp::SubsetReport report =
        probefp::subset_protocol(vectors, model, tau, cfg.eval_repetitions, cfg.eval_seed);
    {
        std::ofstream csv(out_table);
        if (!csv) {
            throw probefp::evaluation_error("cannot open " + out_table);
        }
        csv << "# config_hash=" << config_hash(cfg) << "\n";
        probefp::write_subset_csv(csv, report);
    }
    {
        std::ofstream out(out_summary);
        if (!out) {
            throw probefp::evaluation_error("cannot open " + out_summary);
        }
        json summary = probefp::subset_summary(report, model.bits());
        summary["config_hash"] = config_hash(cfg);
        out << summary.dump(2) << "\n";
    }
    std::vector<std::string> inputs{dataset, model_path};
    if (!pairs_path.empty()) inputs.push_back(pairs_path);
    write_manifest(out_table, "eval-clustering", cfg, inputs, {out_table, out_summary},
                   {{"tau", tau}, {"seeds", {{"eval", cfg.eval_seed}}}});
    std::cout << "v_measure_avg=" << report.v_measure_avg << " rmse_avg=" << report.rmse_avg
              << " tau=" << tau << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compact probe-request fingerprinting pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // config flags may follow the subcommand

    RunConfig cfg;

    // The config file is applied before flag parsing so flags win.
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            config_path = argv[i + 1];
        }
    }
    try {
        if (!config_path.empty()) {
            load_config_file(cfg, config_path);
        }
    } catch (const probefp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    }
    app.add_option("--config", config_path, "key=value config file");

    std::string bank_lengths_flag;
    app.add_option("--bank-lengths", bank_lengths_flag, "filter window lengths, e.g. 4,8,16");
    app.add_option("--stride", cfg.bank_stride, "window placement stride in bits");
    app.add_option("--kinds", cfg.bank_kinds, "filter kinds, subset of ABCD");
    app.add_option("--tmin", cfg.threshold_min, "smallest candidate threshold");
    app.add_option("--tmax", cfg.threshold_max, "largest candidate threshold");
    app.add_option("-M,--bits", cfg.train_rounds, "fingerprint bits (boosting rounds)");
    app.add_option("--threads", cfg.train_threads, "worker threads for the training sweep");
    app.add_flag("--forbid-reselection", cfg.train_forbid_reselection,
                 "never select the same (filter, threshold) twice");
    app.add_option("--matching", cfg.pairs_matching, "matching pair count");
    app.add_option("--train-fraction", cfg.pairs_train_fraction, "train split fraction");
    app.add_option("--seed", cfg.pairs_seed, "pair sampling / split seed");
    app.add_option("--tau", cfg.eval_tau, "matching / clustering threshold");
    app.add_option("--repetitions", cfg.eval_repetitions, "subsets per population size");
    app.add_option("--eval-seed", cfg.eval_seed, "subset sampling seed");

    auto* dissect_cmd = app.add_subcommand("dissect", "parse captures into probe vectors");
    std::vector<std::string> pcaps;
    std::vector<std::string> labels;
    std::vector<int> channels;
    std::string capture_manifest;
    std::string dissect_out;
    dissect_cmd->add_option("--pcap", pcaps, "capture file (repeatable)");
    dissect_cmd->add_option("--label", labels, "device label for the matching --pcap");
    dissect_cmd->add_option("--channel", channels, "channel for the matching --pcap");
    dissect_cmd->add_option("--manifest", capture_manifest, "csv: pcap_path,label[,channel]");
    dissect_cmd->add_option("--out", dissect_out, "output dataset file")->required();

    auto* pairs_cmd = app.add_subcommand("pairs", "build balanced labeled pairs and split them");
    std::string dataset;
    std::string out_train;
    std::string out_test;
    std::string out_all;
    pairs_cmd->add_option("--dataset", dataset, "probe-vector dataset")->required();
    pairs_cmd->add_option("--out-train", out_train, "training pair file")->required();
    pairs_cmd->add_option("--out-test", out_test, "test pair file")->required();
    pairs_cmd->add_option("--out-all", out_all, "optional combined pair file");

    auto* train_cmd = app.add_subcommand("train", "boost a fingerprint model");
    std::string train_dataset;
    std::string train_pairs_path;
    std::string model_out;
    bool quiet = false;
    train_cmd->add_option("--dataset", train_dataset, "probe-vector dataset")->required();
    train_cmd->add_option("--pairs", train_pairs_path, "training pair file")->required();
    train_cmd->add_option("--out", model_out, "output model JSON")->required();
    train_cmd->add_flag("--quiet", quiet, "suppress the per-round progress log");

    auto* fp_cmd = app.add_subcommand("fingerprint", "apply a model to a dataset");
    std::string fp_dataset;
    std::string fp_model;
    std::string fp_out;
    fp_cmd->add_option("--dataset", fp_dataset, "probe-vector dataset")->required();
    fp_cmd->add_option("--model", fp_model, "model JSON")->required();
    fp_cmd->add_option("--out", fp_out, "output fingerprint batch")->required();

    auto* match_cmd = app.add_subcommand("match", "predict whether two fingerprints match");
    std::string match_fps;
    int index_a = 0;
    int index_b = 0;
    int match_tau = 0;
    bool weighted = false;
    std::string match_model;
    double min_score = 0.0;
    match_cmd->add_option("--fingerprints", match_fps, "fingerprint batch")->required();
    match_cmd->add_option("--index-a", index_a, "first record index")->required();
    match_cmd->add_option("--index-b", index_b, "second record index")->required();
    match_cmd->add_option("--match-tau", match_tau, "Hamming threshold: match when distance < tau");
    match_cmd->add_flag("--weighted", weighted, "use the confidence-weighted score");
    match_cmd->add_option("--model", match_model, "model JSON (confidences for --weighted)");
    match_cmd->add_option("--min-score", min_score,
                          "weighted mode: match when score >= this value");

    auto* cluster_cmd = app.add_subcommand("cluster", "online clustering of a fingerprint batch");
    std::string cluster_fps;
    std::string out_assignments;
    std::string out_summary;
    cluster_cmd->add_option("--fingerprints", cluster_fps, "fingerprint batch")->required();
    cluster_cmd->add_option("--out-assignments", out_assignments, "assignment CSV")->required();
    cluster_cmd->add_option("--out-summary", out_summary, "summary JSON")->required();

    auto* roc_cmd = app.add_subcommand("eval-roc", "ROC sweep over tau on test pairs");
    std::string roc_dataset;
    std::string roc_model;
    std::string roc_pairs;
    std::string roc_out;
    roc_cmd->add_option("--dataset", roc_dataset, "probe-vector dataset")->required();
    roc_cmd->add_option("--model", roc_model, "model JSON")->required();
    roc_cmd->add_option("--pairs", roc_pairs, "test pair file")->required();
    roc_cmd->add_option("--out", roc_out, "ROC CSV")->required();

    auto* evalc_cmd = app.add_subcommand("eval-clustering", "random-subset device counting");
    std::string evalc_dataset;
    std::string evalc_model;
    std::string evalc_pairs;
    std::string evalc_table;
    std::string evalc_summary;
    evalc_cmd->add_option("--dataset", evalc_dataset, "probe-vector dataset")->required();
    evalc_cmd->add_option("--model", evalc_model, "model JSON")->required();
    evalc_cmd->add_option("--pairs", evalc_pairs, "test pairs for the ROC-optimal tau");
    evalc_cmd->add_option("--out-table", evalc_table, "per-cell CSV")->required();
    evalc_cmd->add_option("--out-summary", evalc_summary, "summary JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!bank_lengths_flag.empty()) {
            cfg.bank_lengths = parse_int_list(bank_lengths_flag);
        }
        if (dissect_cmd->parsed()) {
            return run_dissect(pcaps, labels, channels, capture_manifest, dissect_out, cfg);
        }
        if (pairs_cmd->parsed()) {
            return run_pairs(dataset, out_train, out_test, out_all, cfg);
        }
        if (train_cmd->parsed()) {
            return run_train(train_dataset, train_pairs_path, model_out, quiet, cfg);
        }
        if (fp_cmd->parsed()) {
            return run_fingerprint(fp_dataset, fp_model, fp_out, cfg);
        }
        if (match_cmd->parsed()) {
            const int tau = match_cmd->count("--match-tau") ? match_tau
                            : cfg.eval_tau >= 0              ? cfg.eval_tau
                                                             : 0;
            return run_match(match_fps, index_a, index_b, tau, weighted, match_model, min_score);
        }
        if (cluster_cmd->parsed()) {
            if (cfg.eval_tau < 0) {
                throw probefp::usage_error("cluster needs --tau (or eval.tau in the config)");
            }
            return run_cluster(cluster_fps, cfg.eval_tau, out_assignments, out_summary, cfg);
        }
        if (roc_cmd->parsed()) {
            return run_eval_roc(roc_dataset, roc_model, roc_pairs, roc_out, cfg);
        }
        if (evalc_cmd->parsed()) {
            return run_eval_clustering(evalc_dataset, evalc_model, evalc_pairs, evalc_table,
                                       evalc_summary, cfg);
        }
    } catch (const probefp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
