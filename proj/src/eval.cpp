#include "vqocc/eval.hpp"

#include "vqocc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vqocc {

RocResult roc_auc(std::span<const double> normal_scores,
                  std::span<const double> anomalous_scores) {
    if (normal_scores.empty() || anomalous_scores.empty())
        throw InvalidArgument("roc_auc: both score lists must be nonempty");

    struct Tagged {
        double score;
        bool anomalous;
    };
    std::vector<Tagged> all;
    all.reserve(normal_scores.size() + anomalous_scores.size());
    for (double s : normal_scores)
        all.push_back({s, false});
    for (double s : anomalous_scores)
        all.push_back({s, true});
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

    // Walk tie groups: each anomalous score beats all strictly smaller normal
    // scores and gets half credit against equal ones.
    double wins = 0.0;
    std::size_t normals_below = 0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        std::size_t group_normal = 0, group_anomalous = 0;
        while (j < all.size() && all[j].score == all[i].score) {
            if (all[j].anomalous)
                ++group_anomalous;
            else
                ++group_normal;
            ++j;
        }
        wins += static_cast<double>(group_anomalous) *
                (static_cast<double>(normals_below) + 0.5 * static_cast<double>(group_normal));
        normals_below += group_normal;
        i = j;
    }

    RocResult result;
    result.n_normal = static_cast<int>(normal_scores.size());
    result.n_anomalous = static_cast<int>(anomalous_scores.size());
    result.auc = wins / (static_cast<double>(result.n_normal) *
                         static_cast<double>(result.n_anomalous));
    return result;
}

std::vector<std::pair<double, double>> roc_curve(std::span<const double> normal_scores,
                                                 std::span<const double> anomalous_scores) {
    if (normal_scores.empty() || anomalous_scores.empty())
        throw InvalidArgument("roc_curve: both score lists must be nonempty");

    struct Tagged {
        double score;
        bool anomalous;
    };
    std::vector<Tagged> all;
    all.reserve(normal_scores.size() + anomalous_scores.size());
    for (double s : normal_scores)
        all.push_back({s, false});
    for (double s : anomalous_scores)
        all.push_back({s, true});
    // Descending: thresholds sweep from "flag nothing" to "flag everything".
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.score > b.score; });

    std::vector<std::pair<double, double>> points;
    points.emplace_back(0.0, 0.0);
    const double inv_n = 1.0 / static_cast<double>(normal_scores.size());
    const double inv_a = 1.0 / static_cast<double>(anomalous_scores.size());
    std::size_t fp = 0, tp = 0, i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) {
            if (all[j].anomalous)
                ++tp;
            else
                ++fp;
            ++j;
        }
        points.emplace_back(static_cast<double>(fp) * inv_n, static_cast<double>(tp) * inv_a);
        i = j;
    }
    return points;
}

AucSummary aggregate(std::span<const double> per_seed_auc, ConfigId config) {
    if (per_seed_auc.size() < 2)
        throw InvalidArgument("aggregate: need at least 2 per-seed values, got " +
                              std::to_string(per_seed_auc.size()));
    AucSummary summary;
    summary.config = std::move(config);
    summary.per_seed.assign(per_seed_auc.begin(), per_seed_auc.end());

    double sum = 0.0;
    for (double v : per_seed_auc)
        sum += v;
    summary.mean = sum / static_cast<double>(per_seed_auc.size());

    double sq = 0.0;
    for (double v : per_seed_auc) {
        const double d = v - summary.mean;
        sq += d * d;
    }
    summary.stddev = std::sqrt(sq / static_cast<double>(per_seed_auc.size() - 1));
    return summary;
}

std::size_t select_best(std::span<const AucSummary> summaries) {
    if (summaries.empty())
        throw InvalidArgument("select_best: empty summary list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        const AucSummary& cand = summaries[i];
        const AucSummary& cur = summaries[best];
        if (cand.mean > cur.mean ||
            (cand.mean == cur.mean &&
             (cand.config.n_params < cur.config.n_params ||
              (cand.config.n_params == cur.config.n_params &&
               cand.config.layers < cur.config.layers))))
            best = i;
    }
    return best;
}

RankedExtremes rank_samples(const TrainedModel& model,
                            std::span<const PixelVector> samples, std::size_t k) {
    if (k > samples.size())
        throw InvalidArgument("rank_samples: k=" + std::to_string(k) + " exceeds sample count " +
                              std::to_string(samples.size()));
    std::vector<RankedSample> ranked(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        ranked[i] = RankedSample{i, score(model, samples[i])};
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedSample& a, const RankedSample& b) {
                         return a.score < b.score;
                     });

    RankedExtremes extremes;
    extremes.lowest.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
    extremes.highest.assign(ranked.end() - static_cast<std::ptrdiff_t>(k), ranked.end());
    return extremes;
}

} // namespace vqocc
