// Command-line driver for the one-class classifier experiments: single runs,
// (n_t, L) sweeps, classical baselines, and extreme-sample dumps.

#include "vqocc/errors.hpp"
#include "vqocc/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace vqocc;

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitConvergence = 4;

struct CommonOptions {
    ExperimentConfig config;
    std::string data_dir = "data";
    std::vector<std::uint64_t> seeds{0};
    std::string out_path;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool paper_grid = false;
    bool lr_set = false, epochs_set = false, batch_set = false, unit_updates = false;
};

void add_common_flags(CLI::App& cmd, CommonOptions& opts, bool with_model_knobs) {
    cmd.add_option("--dataset", opts.config.dataset, "Dataset: digits | fmnist")
        ->check(CLI::IsMember({"digits", "fmnist"}))
        ->capture_default_str();
    cmd.add_option("--data-dir", opts.data_dir,
                   "Directory holding digits.csv and fashion/ idx files")
        ->envname("VQOCC_DATA_DIR")
        ->capture_default_str();
    cmd.add_option("--class", opts.config.normal_class, "Normal class (0-9)")
        ->check(CLI::Range(0, 9))
        ->capture_default_str();
    cmd.add_option("--seeds", opts.seeds, "Seeds, one run per seed")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--threads", opts.threads, "Worker threads for independent runs")
        ->capture_default_str();
    if (with_model_knobs) {
        cmd.add_option("--encoding", opts.config.encoding, "Encoding: amplitude | frqi")
            ->check(CLI::IsMember({"amplitude", "frqi"}))
            ->capture_default_str();
        cmd.add_option("--cost", opts.config.cost, "Cost function: hamming | log")
            ->check(CLI::IsMember({"hamming", "log"}))
            ->capture_default_str();
        cmd.add_option("--lr", opts.config.train.learning_rate, "Adam learning rate")
            ->capture_default_str()
            ->trigger_on_parse()
            ->each([&opts](const std::string&) { opts.lr_set = true; });
        cmd.add_option("--epochs", opts.config.train.iterations,
                       "Training iterations (epochs, or raw updates with "
                       "--iteration-unit updates)")
            ->capture_default_str()
            ->trigger_on_parse()
            ->each([&opts](const std::string&) { opts.epochs_set = true; });
        cmd.add_option("--batch-size", opts.config.train.batch_size, "Mini-batch size")
            ->capture_default_str()
            ->trigger_on_parse()
            ->each([&opts](const std::string&) { opts.batch_set = true; });
        cmd.add_option_function<std::string>(
               "--iteration-unit",
               [&opts](const std::string& unit) {
                   opts.config.train.count_updates = unit == "updates";
                   opts.unit_updates = unit == "updates";
               },
               "Meaning of --epochs: epochs | updates")
            ->check(CLI::IsMember({"epochs", "updates"}));
        cmd.add_option("--trash-qubits", opts.config.trash_override,
                       "Explicit trash wire indices (default: highest)")
            ->delimiter(',');
        cmd.add_flag("--paper-grid", opts.paper_grid,
                     "Lock hyperparameters to the published experiment grid");
    }
}

// With --paper-grid the published hyperparameters are mandatory; explicit
// conflicting overrides are config errors rather than silent corrections.
void enforce_paper_grid(const CommonOptions& opts, bool check_layers) {
    if (!opts.paper_grid)
        return;
    if (opts.lr_set && opts.config.train.learning_rate != 0.1)
        throw InvalidArgument("--paper-grid fixes the learning rate at 0.1");
    if (opts.epochs_set && opts.config.train.iterations != 150)
        throw InvalidArgument("--paper-grid fixes training at 150 epochs");
    if (opts.batch_set && opts.config.train.batch_size != 10)
        throw InvalidArgument("--paper-grid fixes the batch size at 10");
    if (opts.unit_updates)
        throw InvalidArgument("--paper-grid counts iterations in epochs");
    if (check_layers && !layer_grid_allows(opts.config.n_trash, opts.config.layers))
        throw InvalidArgument("--paper-grid: layers " + std::to_string(opts.config.layers) +
                              " is not in the published grid for n_t=" +
                              std::to_string(opts.config.n_trash));
    if (opts.config.baseline_nu) {
        const auto nus = nu_grid();
        if (std::find(nus.begin(), nus.end(), *opts.config.baseline_nu) == nus.end())
            throw InvalidArgument("--paper-grid: nu must be one of {0.01, 0.1}");
    }
    if (opts.config.baseline_gamma) {
        const auto gammas = gamma_grid();
        if (std::find(gammas.begin(), gammas.end(), *opts.config.baseline_gamma) ==
            gammas.end())
            throw InvalidArgument("--paper-grid: gamma must be a power of two in "
                                  "[2^-10, 2^-1]");
    }
    if (opts.config.baseline_q) {
        const auto qs = kpca_q_grid();
        if (std::find(qs.begin(), qs.end(), *opts.config.baseline_q) == qs.end())
            throw InvalidArgument("--paper-grid: q must be one of {1, 2, 4, 8, 16, 32}");
    }
}

// Drops seeds whose (config-hash, seed) pair already exists in the output
// file, making interrupted multi-seed runs resumable.
std::vector<std::uint64_t> resumable_seeds(const CommonOptions& opts) {
    if (opts.out_path.empty())
        return opts.seeds;
    const auto existing = existing_record_keys(opts.out_path);
    if (existing.empty())
        return opts.seeds;
    const std::string hash = config_hash(opts.config);
    std::vector<std::uint64_t> todo;
    for (std::uint64_t seed : opts.seeds) {
        if (existing.count({hash, seed}))
            std::cerr << "skipping seed " << seed << " (already in " << opts.out_path
                      << ")\n";
        else
            todo.push_back(seed);
    }
    return todo;
}

void emit_records(const CommonOptions& opts, std::span<const ExperimentRecord> records) {
    if (!opts.out_path.empty()) {
        append_records(opts.out_path, records);
        std::cerr << records.size() << " record(s) appended to " << opts.out_path << "\n";
    }
    for (const auto& record : records)
        std::cout << record.to_json().dump() << "\n";
}

int command_run(CommonOptions& opts, const std::string& model_out) {
    enforce_paper_grid(opts, /*check_layers=*/true);
    opts.config.validate();
    const CorpusBundle corpus = load_corpus(opts.config.dataset, opts.data_dir);

    const auto seeds = resumable_seeds(opts);
    std::vector<ExperimentRecord> records(seeds.size());
    std::vector<TrainedModel> models(seeds.size());
    parallel_for_indexed(seeds.size(), opts.threads, [&](std::size_t i) {
        auto result = run_vqocc(corpus, opts.config, seeds[i]);
        records[i] = std::move(result.record);
        models[i] = std::move(result.model);
    });
    emit_records(opts, records);

    if (!model_out.empty()) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            // single seed keeps the exact path; multiple seeds get a suffix
            const std::string path =
                seeds.size() == 1
                    ? model_out
                    : model_out + ".seed" + std::to_string(seeds[i]);
            save_model(models[i], path);
            std::cerr << "model written to " << path << "\n";
        }
    }
    return kExitOk;
}

int command_sweep(CommonOptions& opts) {
    enforce_paper_grid(opts, /*check_layers=*/false);
    opts.config.validate();
    if (opts.seeds.size() < 2)
        throw InvalidArgument("sweep needs at least 2 seeds to aggregate");
    const CorpusBundle corpus = load_corpus(opts.config.dataset, opts.data_dir);

    const SweepResult sweep = run_sweep(corpus, opts.config, opts.seeds, opts.threads);
    const std::string csv = sweep_csv(sweep);
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out)
            throw Error("cannot open " + opts.out_path);
        out << csv;
        std::cerr << "sweep table written to " << opts.out_path << "\n";
    }
    std::cout << csv;
    const SweepRow& best = sweep.rows[sweep.best_index];
    std::cerr << "best: n_t=" << best.n_trash << " L=" << best.layers << " mean AUC "
              << best.summary.mean * 100.0 << "%\n";
    return kExitOk;
}

int command_baseline(CommonOptions& opts) {
    enforce_paper_grid(opts, /*check_layers=*/false);
    if (opts.config.baseline.empty())
        throw InvalidArgument("--baseline kpca|ocsvm is required");
    opts.config.validate();
    const CorpusBundle corpus = load_corpus(opts.config.dataset, opts.data_dir);

    const auto seeds = resumable_seeds(opts);
    std::vector<ExperimentRecord> records(seeds.size());
    parallel_for_indexed(seeds.size(), opts.threads, [&](std::size_t i) {
        records[i] = run_baseline(corpus, opts.config, seeds[i]);
    });
    emit_records(opts, records);
    return kExitOk;
}

int command_dump_extremes(const CommonOptions& opts, const std::string& model_path,
                          std::uint64_t split_seed, int k, const std::string& out_dir) {
    const TrainedModel model = load_model(model_path);
    const CorpusBundle corpus = load_corpus(opts.config.dataset, opts.data_dir);
    const Split split = split_for(corpus, opts.config.normal_class, split_seed);

    const int expected_features = static_cast<int>(split.train.front().size());
    const int required = required_qubits(model.encoding, expected_features);
    if (required != model.circuit.config.n_qubits)
        throw InvalidArgument("model expects " +
                              std::to_string(model.circuit.config.n_qubits) +
                              "-qubit states but dataset " + opts.config.dataset +
                              " encodes to " + std::to_string(required));

    // In-class ranking: the normal-class test samples only.
    std::vector<PixelVector> in_class;
    for (const TestSample& s : split.test)
        if (!s.is_anomalous)
            in_class.push_back(s.pixels);
    const auto extremes = rank_samples(model, in_class, static_cast<std::size_t>(k));

    fs::create_directories(out_dir);
    const int side = static_cast<int>(std::lround(std::sqrt(expected_features)));
    const double pixel_max = corpus.train_corpus.pixel_max;

    ordered_json manifest;
    manifest["model"] = model_path;
    manifest["dataset"] = opts.config.dataset;
    manifest["normal_class"] = opts.config.normal_class;
    manifest["seed"] = split_seed;
    manifest["normal"] = ordered_json::array();
    manifest["anomalous"] = ordered_json::array();
    const auto dump_group = [&](const std::vector<RankedSample>& group,
                                const std::string& tag, ordered_json& list) {
        for (std::size_t i = 0; i < group.size(); ++i) {
            const std::string name = tag + "_" + std::to_string(i) + ".pgm";
            write_pgm((fs::path(out_dir) / name).string(), in_class[group[i].index], side,
                      side, pixel_max);
            list.push_back(ordered_json{{"file", name}, {"score", group[i].score}});
        }
    };
    dump_group(extremes.lowest, "most_normal", manifest["normal"]);
    dump_group(extremes.highest, "most_anomalous", manifest["anomalous"]);

    const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    if (!out)
        throw Error("cannot open " + manifest_path);
    out << manifest.dump(2) << "\n";
    std::cerr << 2 * k << " images and manifest written to " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum one-class classifier experiments"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts, baseline_opts, dump_opts;
    std::string model_out, model_path, out_dir = "extremes";
    std::uint64_t split_seed = 0;
    int k = 5;

    auto* run_cmd = app.add_subcommand(
        "run", "Train and evaluate one configuration over the given seeds");
    add_common_flags(*run_cmd, run_opts, /*with_model_knobs=*/true);
    run_cmd->add_option("--nt", run_opts.config.n_trash, "Number of trash qubits")
        ->capture_default_str();
    run_cmd->add_option("--layers", run_opts.config.layers, "Circuit layers")
        ->capture_default_str();
    run_cmd->add_option("--out", run_opts.out_path, "JSON-lines record file (appended)");
    run_cmd->add_option("--model-out", model_out, "Write the trained model(s) here");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Run the full (n_t, layers) grid and aggregate over seeds");
    add_common_flags(*sweep_cmd, sweep_opts, /*with_model_knobs=*/true);
    sweep_cmd->add_option("--out", sweep_opts.out_path, "CSV summary file");

    auto* baseline_cmd = app.add_subcommand(
        "baseline", "Kernel-PCA / OC-SVM with per-seed holdout grid search");
    add_common_flags(*baseline_cmd, baseline_opts, /*with_model_knobs=*/false);
    baseline_cmd
        ->add_option("--baseline", baseline_opts.config.baseline, "Method: kpca | ocsvm")
        ->check(CLI::IsMember({"kpca", "ocsvm"}))
        ->required();
    baseline_cmd->add_flag("--normalize", baseline_opts.config.normalize_inputs,
                           "Unit-normalize inputs before fitting");
    baseline_cmd->add_option("--gamma", baseline_opts.config.baseline_gamma,
                             "Pin the RBF gamma instead of searching the grid");
    baseline_cmd->add_option("--q", baseline_opts.config.baseline_q,
                             "Pin the kernel-PCA component count");
    baseline_cmd->add_option("--nu", baseline_opts.config.baseline_nu,
                             "Pin the OC-SVM nu");
    baseline_cmd->add_flag("--paper-grid", baseline_opts.paper_grid,
                           "Restrict hyperparameters to the published grids");
    baseline_cmd->add_option("--out", baseline_opts.out_path,
                             "JSON-lines record file (appended)");

    auto* dump_cmd = app.add_subcommand(
        "dump-extremes",
        "Write the k most normal / most anomalous in-class test samples as PGM");
    add_common_flags(*dump_cmd, dump_opts, /*with_model_knobs=*/false);
    dump_cmd->add_option("--model", model_path, "Serialized model file")->required();
    dump_cmd->add_option("--seed", split_seed, "Split seed the model was trained with")
        ->capture_default_str();
    dump_cmd->add_option("--dump-extremes,-k", k, "Samples per extreme")
        ->capture_default_str();
    dump_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run_cmd->parsed())
            return command_run(run_opts, model_out);
        if (sweep_cmd->parsed())
            return command_sweep(sweep_opts);
        if (baseline_cmd->parsed())
            return command_baseline(baseline_opts);
        return command_dump_extremes(dump_opts, model_path, split_seed, k, out_dir);
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitData;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitData;
    } catch (const CapacityError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DegenerateInput& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
