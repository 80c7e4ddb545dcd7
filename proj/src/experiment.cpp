#include "vqocc/experiment.hpp"

#include "vqocc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace vqocc {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (dataset != "digits" && dataset != "fmnist")
        throw InvalidArgument("config: dataset must be 'digits' or 'fmnist', got '" +
                              dataset + "'");
    if (normal_class < 0 || normal_class > 9)
        throw InvalidArgument("config: normal_class must be in [0, 9]");
    if (encoding != "amplitude" && encoding != "frqi")
        throw InvalidArgument("config: encoding must be 'amplitude' or 'frqi', got '" +
                              encoding + "'");
    if (cost != "hamming" && cost != "log")
        throw InvalidArgument("config: cost must be 'hamming' or 'log', got '" + cost + "'");
    if (!baseline.empty() && baseline != "kpca" && baseline != "ocsvm")
        throw InvalidArgument("config: baseline must be 'kpca' or 'ocsvm', got '" +
                              baseline + "'");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw InvalidArgument("config: holdout_fraction must be in (0, 1)");
    if (baseline_gamma && *baseline_gamma <= 0.0)
        throw InvalidArgument("config: baseline gamma must be positive");
    if (baseline_q && *baseline_q < 1)
        throw InvalidArgument("config: baseline q must be >= 1");
    if (baseline_nu && !(*baseline_nu > 0.0 && *baseline_nu <= 1.0))
        throw InvalidArgument("config: baseline nu must be in (0, 1]");
    train.validate();
}

ordered_json config_json(const ExperimentConfig& config) {
    ordered_json j;
    j["dataset"] = config.dataset;
    j["normal_class"] = config.normal_class;
    j["encoding"] = config.encoding;
    j["n_trash"] = config.n_trash;
    j["layers"] = config.layers;
    j["cost"] = config.cost;
    j["train"] = ordered_json{{"learning_rate", config.train.learning_rate},
                              {"batch_size", config.train.batch_size},
                              {"iterations", config.train.iterations},
                              {"iteration_unit",
                               config.train.count_updates ? "updates" : "epochs"},
                              {"adam_beta1", config.train.adam_beta1},
                              {"adam_beta2", config.train.adam_beta2},
                              {"adam_eps", config.train.adam_eps}};
    j["normalize_inputs"] = config.normalize_inputs;
    j["baseline"] = config.baseline;
    j["trash_override"] = config.trash_override;
    j["holdout_fraction"] = config.holdout_fraction;
    j["baseline_gamma"] = config.baseline_gamma ? ordered_json(*config.baseline_gamma)
                                                : ordered_json(nullptr);
    j["baseline_q"] =
        config.baseline_q ? ordered_json(*config.baseline_q) : ordered_json(nullptr);
    j["baseline_nu"] =
        config.baseline_nu ? ordered_json(*config.baseline_nu) : ordered_json(nullptr);
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string dump = config_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ordered_json ExperimentRecord::to_json() const {
    ordered_json j;
    j["config"] = config;
    j["config_hash"] = hash;
    j["seed"] = seed;
    j["auc"] = auc;
    j["final_cost"] = final_cost;
    j["wall_seconds"] = wall_seconds;
    j["n_params"] = n_params;
    j["depth"] = depth;
    if (!details.is_null())
        j["details"] = details;
    return j;
}

void append_records(const std::string& path, std::span<const ExperimentRecord> records) {
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw Error("cannot open record file for append: " + path);
    for (const auto& r : records)
        out << r.to_json().dump() << '\n';
}

std::set<std::pair<std::string, std::uint64_t>> existing_record_keys(const std::string& path) {
    std::set<std::pair<std::string, std::uint64_t>> keys;
    std::ifstream in(path);
    if (!in)
        return keys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.contains("config_hash") || !j.contains("seed"))
            continue;
        keys.emplace(j["config_hash"].get<std::string>(), j["seed"].get<std::uint64_t>());
    }
    return keys;
}

namespace {

std::string find_idx_file(const fs::path& dir, const std::string& stem) {
    for (const char* suffix : {"", ".gz"}) {
        const fs::path candidate = dir / (stem + suffix);
        if (fs::exists(candidate))
            return candidate.string();
    }
    throw FormatError("missing dataset file " + (dir / stem).string() + "[.gz]");
}

} // namespace

CorpusBundle load_corpus(const std::string& dataset, const std::string& data_dir) {
    CorpusBundle bundle;
    if (dataset == "digits") {
        const fs::path path = fs::path(data_dir) / "digits.csv";
        if (!fs::exists(path))
            throw FormatError("missing dataset file " + path.string());
        bundle.train_corpus = load_digits(path.string());
    } else if (dataset == "fmnist") {
        const fs::path dir = fs::path(data_dir) / "fashion";
        bundle.train_corpus =
            load_fashion_mnist(find_idx_file(dir, "train-images-idx3-ubyte"),
                               find_idx_file(dir, "train-labels-idx1-ubyte"));
        bundle.test_corpus =
            load_fashion_mnist(find_idx_file(dir, "t10k-images-idx3-ubyte"),
                               find_idx_file(dir, "t10k-labels-idx1-ubyte"));
    } else {
        throw InvalidArgument("load_corpus: unknown dataset '" + dataset + "'");
    }
    return bundle;
}

Split split_for(const CorpusBundle& corpus, int normal_class, std::uint64_t seed) {
    if (corpus.test_corpus)
        return make_split(corpus.train_corpus, *corpus.test_corpus, normal_class, seed);
    return make_split(corpus.train_corpus, normal_class, seed);
}

EncodingKind encoding_kind_for(const ExperimentConfig& config, const LabeledDataset& ds) {
    if (config.encoding == "amplitude")
        return EncodingKind::amplitude();
    return EncodingKind::frqi(ds.pixel_max);
}

CostKind cost_kind_for(const ExperimentConfig& config) {
    return config.cost == "hamming" ? CostKind::hamming() : CostKind::log_loss();
}

AnsatzConfig ansatz_for(const ExperimentConfig& config, int n_qubits) {
    AnsatzConfig ansatz;
    ansatz.n_qubits = n_qubits;
    ansatz.n_trash = config.n_trash;
    ansatz.layers = config.layers;
    ansatz.trash_qubits = config.trash_override;
    return ansatz;
}

namespace {

// Emitting a record whose resource counts disagree with the closed forms
// would invalidate every downstream table, so re-check before writing.
void check_resource_counts(const CircuitDescriptor& circuit) {
    const AnsatzConfig& config = circuit.config;
    int n_ry = 0, n_cz = 0;
    for (const Gate& g : circuit.gates)
        (g.kind == GateKind::RotationY ? n_ry : n_cz) += 1;
    if (n_ry != param_count(config) || circuit.n_params != param_count(config))
        throw Error("internal: parameter count deviates from closed form");
    if (n_cz != two_qubit_count(config))
        throw Error("internal: two-qubit gate count deviates from closed form");
    if (scheduled_depth(circuit) != depth(config))
        throw Error("internal: scheduled depth deviates from closed form");
}

} // namespace

VqoccRunResult run_vqocc(const CorpusBundle& corpus, const ExperimentConfig& config,
                         std::uint64_t seed) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const Split split = split_for(corpus, config.normal_class, seed);
    const LabeledDataset& ds = corpus.train_corpus;
    const EncodingKind kind = encoding_kind_for(config, ds);
    const int n_features = static_cast<int>(split.train.front().size());
    const int n_qubits = required_qubits(kind, n_features);

    const CircuitDescriptor circuit = build_circuit(ansatz_for(config, n_qubits));
    check_resource_counts(circuit);

    std::vector<Statevector> encoded_train;
    encoded_train.reserve(split.train.size());
    for (const auto& x : split.train)
        encoded_train.push_back(encode(kind, x));

    TrainConfig train_cfg = config.train;
    train_cfg.seed = seed;
    TrainedModel model = train(encoded_train, circuit, cost_kind_for(config), train_cfg, kind);

    ExperimentRecord record;
    record.config = config_json(config);
    record.hash = config_hash(config);
    record.seed = seed;
    record.n_params = circuit.n_params;
    record.depth = depth(circuit.config);
    record.final_cost = model.training_curve.empty() ? 0.0 : model.training_curve.back();

    if (!std::isfinite(record.final_cost)) {
        record.auc = std::numeric_limits<double>::quiet_NaN();
        record.details = ordered_json{{"error", "non-finite training cost"}};
    } else {
        std::vector<double> normal_scores, anomalous_scores;
        for (const TestSample& s : split.test) {
            const double v = score_encoded(model, encode(kind, s.pixels));
            (s.is_anomalous ? anomalous_scores : normal_scores).push_back(v);
        }
        record.auc = roc_auc(normal_scores, anomalous_scores).auc;
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return VqoccRunResult{std::move(record), std::move(model)};
}

ExperimentRecord run_baseline(const CorpusBundle& corpus, const ExperimentConfig& config,
                              std::uint64_t seed) {
    config.validate();
    if (config.baseline.empty())
        throw InvalidArgument("run_baseline: config selects no baseline method");
    const auto t0 = std::chrono::steady_clock::now();

    Split split = split_for(corpus, config.normal_class, seed);
    if (config.normalize_inputs) {
        for (auto& x : split.train)
            x = normalize_unit(x);
        for (auto& s : split.test)
            s.pixels = normalize_unit(s.pixels);
    }

    const HoldoutSplit hold = holdout(split, config.holdout_fraction, seed);
    const BaselineMethod method =
        config.baseline == "kpca" ? BaselineMethod::Kpca : BaselineMethod::Ocsvm;
    const std::vector<double> gammas =
        config.baseline_gamma ? std::vector<double>{*config.baseline_gamma} : gamma_grid();
    const std::vector<int> qs =
        config.baseline_q ? std::vector<int>{*config.baseline_q} : kpca_q_grid();
    const std::vector<double> nus =
        config.baseline_nu ? std::vector<double>{*config.baseline_nu} : nu_grid();
    const GridChoice choice = grid_search(split.train, hold.holdout, method, gammas, qs, nus);

    std::vector<double> normal_scores, anomalous_scores;
    ordered_json details;
    details["method"] = config.baseline;
    details["gamma"] = choice.gamma;
    details["holdout_auc"] = choice.holdout_auc;
    if (method == BaselineMethod::Kpca) {
        details["q"] = choice.q;
        const KpcaModel model = kpca_fit(split.train, choice.gamma, choice.q);
        for (const TestSample& s : hold.remainder) {
            const double v = kpca_score(model, s.pixels);
            (s.is_anomalous ? anomalous_scores : normal_scores).push_back(v);
        }
    } else {
        details["nu"] = choice.nu;
        const OcsvmModel model = ocsvm_fit(split.train, choice.gamma, choice.nu);
        for (const TestSample& s : hold.remainder) {
            const double v = ocsvm_score(model, s.pixels);
            (s.is_anomalous ? anomalous_scores : normal_scores).push_back(v);
        }
    }

    ExperimentRecord record;
    record.config = config_json(config);
    record.hash = config_hash(config);
    record.seed = seed;
    record.auc = roc_auc(normal_scores, anomalous_scores).auc;
    record.details = std::move(details);
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

const std::vector<std::pair<int, std::vector<int>>>& layer_grid() {
    static const std::vector<std::pair<int, std::vector<int>>> grid = {
        {2, {2, 4, 8, 12, 16}},
        {3, {2, 4, 6, 8, 10}},
        {4, {2, 4, 6, 8}},
    };
    return grid;
}

bool layer_grid_allows(int n_trash, int layers) {
    for (const auto& [nt, layer_list] : layer_grid()) {
        if (nt == n_trash)
            return std::find(layer_list.begin(), layer_list.end(), layers) !=
                   layer_list.end();
    }
    return false;
}

SweepResult run_sweep(const CorpusBundle& corpus, const ExperimentConfig& base,
                      std::span<const std::uint64_t> seeds, int threads) {
    if (seeds.size() < 2)
        throw InvalidArgument("run_sweep: need at least 2 seeds to aggregate");

    struct Task {
        ExperimentConfig config;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& [nt, layer_list] : layer_grid()) {
        for (int layers : layer_list) {
            ExperimentConfig config = base;
            config.n_trash = nt;
            config.layers = layers;
            for (std::uint64_t seed : seeds)
                tasks.push_back(Task{config, seed});
        }
    }

    std::vector<ExperimentRecord> records(tasks.size());
    parallel_for_indexed(tasks.size(), threads, [&](std::size_t i) {
        records[i] = run_vqocc(corpus, tasks[i].config, tasks[i].seed).record;
    });

    SweepResult result;
    std::vector<AucSummary> summaries;
    std::size_t cursor = 0;
    for (const auto& [nt, layer_list] : layer_grid()) {
        for (int layers : layer_list) {
            std::vector<double> per_seed;
            for (std::size_t s = 0; s < seeds.size(); ++s)
                per_seed.push_back(records[cursor + s].auc);
            cursor += seeds.size();

            SweepRow row;
            row.n_trash = nt;
            row.layers = layers;
            // Resource counts come from the recorded circuit, which already
            // re-validated the closed forms.
            row.depth = records[cursor - 1].depth;
            row.n_params = records[cursor - 1].n_params;
            ConfigId id{"nt" + std::to_string(nt) + "-L" + std::to_string(layers), nt,
                        layers, row.n_params};
            row.summary = aggregate(per_seed, id);
            summaries.push_back(row.summary);
            result.rows.push_back(std::move(row));
        }
    }
    result.best_index = select_best(summaries);
    result.records = std::move(records);
    return result;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string csv = "n_trash,layers,depth,n_params,mean_auc,std_auc,best\n";
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const SweepRow& row = sweep.rows[i];
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.10f,%.10f,%d\n", row.n_trash,
                      row.layers, row.depth, row.n_params, row.summary.mean,
                      row.summary.stddev, i == sweep.best_index ? 1 : 0);
        csv += buf;
    }
    return csv;
}

void save_model(const TrainedModel& model, const std::string& path) {
    ordered_json j;
    j["format"] = "vqocc-model-v1";
    j["encoding"] =
        ordered_json{{"kind", model.encoding.variant == EncodingVariant::Amplitude
                                  ? "amplitude"
                                  : "frqi"},
                     {"pixel_max", model.encoding.pixel_max}};
    j["ansatz"] = ordered_json{{"n_qubits", model.circuit.config.n_qubits},
                               {"n_trash", model.circuit.config.n_trash},
                               {"layers", model.circuit.config.layers},
                               {"trash_qubits", model.circuit.config.trash_qubits}};
    j["cost"] = ordered_json{
        {"kind", model.cost_kind.variant == CostVariant::HammingLocal ? "hamming" : "log"},
        {"log_floor", model.cost_kind.log_floor}};
    j["params"] = model.params;
    j["training_curve"] = model.training_curve;

    std::ofstream out(path);
    if (!out)
        throw Error("cannot open model file for writing: " + path);
    out << j.dump(2) << '\n';
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open model file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model file " + path + ": " + e.what());
    }
    if (j.value("format", "") != "vqocc-model-v1")
        throw FormatError("model file " + path + ": unknown format tag");

    TrainedModel model;
    const auto& enc = j.at("encoding");
    model.encoding = enc.at("kind") == "amplitude"
                         ? EncodingKind::amplitude()
                         : EncodingKind::frqi(enc.at("pixel_max").get<double>());

    AnsatzConfig ansatz;
    const auto& a = j.at("ansatz");
    ansatz.n_qubits = a.at("n_qubits").get<int>();
    ansatz.n_trash = a.at("n_trash").get<int>();
    ansatz.layers = a.at("layers").get<int>();
    ansatz.trash_qubits = a.at("trash_qubits").get<std::vector<int>>();
    model.circuit = build_circuit(ansatz);

    const auto& c = j.at("cost");
    model.cost_kind = c.at("kind") == "hamming"
                          ? CostKind::hamming()
                          : CostKind::log_loss(c.at("log_floor").get<double>());
    model.params = j.at("params").get<std::vector<double>>();
    model.training_curve = j.at("training_curve").get<std::vector<double>>();
    if (static_cast<int>(model.params.size()) != model.circuit.n_params)
        throw FormatError("model file " + path + ": parameter vector length " +
                          std::to_string(model.params.size()) + " does not match circuit (" +
                          std::to_string(model.circuit.n_params) + ")");
    return model;
}

void write_pgm(const std::string& path, std::span<const double> pixels, int width,
               int height, double pixel_max) {
    if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != pixels.size())
        throw InvalidArgument("write_pgm: dimensions do not match pixel count");
    const int maxval = std::max(1, static_cast<int>(std::llround(pixel_max)));
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open PGM file for writing: " + path);
    out << "P2\n" << width << ' ' << height << '\n' << maxval << '\n';
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double v = pixels[static_cast<std::size_t>(r) * width + c];
            const int q = std::clamp(static_cast<int>(std::llround(v)), 0, maxval);
            out << q << (c + 1 == width ? '\n' : ' ');
        }
    }
}

void parallel_for_indexed(std::size_t n, int threads,
                          const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, threads < 1 ? 1 : static_cast<std::size_t>(threads));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace vqocc
