#pragma once

#include "vqocc/baselines.hpp"
#include "vqocc/data.hpp"
#include "vqocc/eval.hpp"
#include "vqocc/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vqocc {

using ordered_json = nlohmann::ordered_json;

// One experiment definition; the seed list is supplied separately so a single
// config expands into one record per seed.
struct ExperimentConfig {
    std::string dataset = "digits"; // "digits" | "fmnist"
    int normal_class = 0;
    std::string encoding = "amplitude"; // "amplitude" | "frqi"
    int n_trash = 2;
    int layers = 8;
    std::string cost = "hamming"; // "hamming" | "log"
    TrainConfig train;
    bool normalize_inputs = false;       // baselines only (amplitude-encoding analogue)
    std::string baseline;                // "", "kpca", "ocsvm"
    std::vector<int> trash_override;     // optional explicit trash wires
    double holdout_fraction = 0.1;       // baseline hyperparameter selection
    // Pin a baseline hyperparameter instead of searching its grid.
    std::optional<double> baseline_gamma;
    std::optional<int> baseline_q;   // kpca
    std::optional<double> baseline_nu; // ocsvm

    void validate() const;
};

// Canonical JSON echo of a config; field order is fixed so the hash is stable.
ordered_json config_json(const ExperimentConfig& config);

// FNV-1a hash (hex) of the canonical config JSON; used for resume bookkeeping.
std::string config_hash(const ExperimentConfig& config);

struct ExperimentRecord {
    ordered_json config;
    std::string hash;
    std::uint64_t seed = 0;
    double auc = 0.0;
    double final_cost = 0.0; // final training-curve value; 0 for baselines
    double wall_seconds = 0.0;
    int n_params = 0; // 0 for baselines
    int depth = 0;    // 0 for baselines
    ordered_json details; // baseline hyperparameters, diagnostics

    ordered_json to_json() const;
};

// Appends one JSON object per record to a JSON-lines file.
void append_records(const std::string& path, std::span<const ExperimentRecord> records);

// (config-hash, seed) pairs already present in a JSON-lines file; missing file
// yields an empty set.
std::set<std::pair<std::string, std::uint64_t>> existing_record_keys(const std::string& path);

// Train corpus plus, for Fashion-MNIST, the official test corpus.
struct CorpusBundle {
    LabeledDataset train_corpus;
    std::optional<LabeledDataset> test_corpus;
};

// Resolves dataset files under `data_dir`: digits.csv for the digits corpus,
// fashion/{train,t10k}-{images,labels}-idx*-ubyte[.gz] for Fashion-MNIST.
CorpusBundle load_corpus(const std::string& dataset, const std::string& data_dir);

Split split_for(const CorpusBundle& corpus, int normal_class, std::uint64_t seed);

EncodingKind encoding_kind_for(const ExperimentConfig& config, const LabeledDataset& ds);
CostKind cost_kind_for(const ExperimentConfig& config);
AnsatzConfig ansatz_for(const ExperimentConfig& config, int n_qubits);

struct VqoccRunResult {
    ExperimentRecord record;
    TrainedModel model;
};

// Full per-seed pipeline: split, encode, build, train, score, AUC.
VqoccRunResult run_vqocc(const CorpusBundle& corpus, const ExperimentConfig& config,
                         std::uint64_t seed);

// Baseline per-seed pipeline: split, holdout, grid search, fit, AUC on the
// remainder.
ExperimentRecord run_baseline(const CorpusBundle& corpus, const ExperimentConfig& config,
                              std::uint64_t seed);

// The experiment layer grid: (n_trash, layer list) pairs.
const std::vector<std::pair<int, std::vector<int>>>& layer_grid();

// True when `layers` belongs to the grid row for `n_trash`.
bool layer_grid_allows(int n_trash, int layers);

struct SweepRow {
    int n_trash = 0;
    int layers = 0;
    int depth = 0;
    int n_params = 0;
    AucSummary summary;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t best_index = 0;
    std::vector<ExperimentRecord> records; // every per-seed record of the sweep
};

// Runs the full (n_trash, layers) grid for the given base config over the
// seed list, `threads` seed-runs at a time.
SweepResult run_sweep(const CorpusBundle& corpus, const ExperimentConfig& base,
                      std::span<const std::uint64_t> seeds, int threads);

// CSV table of a sweep: one row per (n_trash, layers) plus a best flag.
std::string sweep_csv(const SweepResult& sweep);

// Self-describing model serialization (JSON; full-precision parameters).
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

// ASCII PGM (P2) with maxval = round(pixel_max).
void write_pgm(const std::string& path, std::span<const double> pixels, int width,
               int height, double pixel_max);

// Runs `fn(i)` for i in [0, n) on up to `threads` worker threads. Each task
// writes only into its own slot, so results are order-independent.
void parallel_for_indexed(std::size_t n, int threads,
                          const std::function<void(std::size_t)>& fn);

} // namespace vqocc
