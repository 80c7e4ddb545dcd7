#pragma once

#include "vqocc/model.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vqocc {

struct RocResult {
    double auc = 0.0;
    int n_normal = 0;
    int n_anomalous = 0;
};

// Mann-Whitney AUC with half credit for ties, computed via sorting.
// Convention: higher score = more anomalous = positive class.
RocResult roc_auc(std::span<const double> normal_scores,
                  std::span<const double> anomalous_scores);

// (FPR, TPR) points of the ROC curve, one per distinct threshold, for
// plotting; starts at (0, 0) and ends at (1, 1).
std::vector<std::pair<double, double>> roc_curve(std::span<const double> normal_scores,
                                                 std::span<const double> anomalous_scores);

struct ConfigId {
    std::string label;
    int n_trash = 0;
    int layers = 0;
    int n_params = 0;
};

struct AucSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    std::vector<double> per_seed;
    ConfigId config;
};

// Mean and sample standard deviation over per-seed AUCs (needs >= 2 values).
AucSummary aggregate(std::span<const double> per_seed_auc, ConfigId config);

// Index of the summary with maximal mean AUC; ties broken by smaller
// parameter count, then smaller layer count.
std::size_t select_best(std::span<const AucSummary> summaries);

struct RankedSample {
    std::size_t index = 0; // position in the input list
    double score = 0.0;
};

struct RankedExtremes {
    std::vector<RankedSample> lowest;  // k most normal, ascending score
    std::vector<RankedSample> highest; // k most anomalous, ascending score
};

// Scores every sample with the model and returns the k lowest- and k
// highest-scoring ones; equal scores keep input order.
RankedExtremes rank_samples(const TrainedModel& model,
                            std::span<const PixelVector> samples, std::size_t k);

} // namespace vqocc
