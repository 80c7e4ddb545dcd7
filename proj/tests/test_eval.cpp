#include "vqocc/eval.hpp"

#include "vqocc/errors.hpp"
#include "vqocc/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace vqocc;

namespace {

// O(m*n) pairwise oracle with half credit for ties.
double brute_force_auc(const std::vector<double>& normal,
                       const std::vector<double>& anomalous) {
    double wins = 0.0;
    for (double a : anomalous)
        for (double n : normal) {
            if (a > n)
                wins += 1.0;
            else if (a == n)
                wins += 0.5;
        }
    return wins / (static_cast<double>(normal.size()) * static_cast<double>(anomalous.size()));
}

} // namespace

TEST_CASE("roc_auc on pinned score lists") {
    CHECK(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<double>{0.3, 0.4}).auc ==
          doctest::Approx(1.0));
    CHECK(roc_auc(std::vector<double>{0.5, 0.5, 0.5}, std::vector<double>{0.5, 0.5}).auc ==
          doctest::Approx(0.5));
    CHECK(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<double>{0.15, 0.3}).auc ==
          doctest::Approx(0.75));
    CHECK_THROWS_AS(roc_auc(std::vector<double>{}, std::vector<double>{1.0}),
                    InvalidArgument);
}

TEST_CASE("sorted AUC equals the brute-force pairwise count exactly") {
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n_normal = 1 + rng.uniform_below(200);
        const std::size_t n_anomalous = 1 + rng.uniform_below(200);
        std::vector<double> normal(n_normal), anomalous(n_anomalous);
        // quantized scores force plenty of ties
        for (double& v : normal)
            v = static_cast<double>(rng.uniform_below(20)) / 10.0;
        for (double& v : anomalous)
            v = static_cast<double>(rng.uniform_below(20)) / 10.0;
        CHECK(roc_auc(normal, anomalous).auc == brute_force_auc(normal, anomalous));
    }
}

TEST_CASE("roc_auc complements when the lists swap roles") {
    Rng rng(99);
    std::vector<double> a(50), b(70);
    for (double& v : a)
        v = static_cast<double>(rng.uniform_below(30));
    for (double& v : b)
        v = static_cast<double>(rng.uniform_below(30));
    CHECK(roc_auc(a, b).auc == doctest::Approx(1.0 - roc_auc(b, a).auc));
}

TEST_CASE("AUC is invariant under strictly increasing score transforms") {
    Rng rng(55);
    std::vector<double> normal(80), anomalous(60);
    for (double& v : normal)
        v = rng.uniform();
    for (double& v : anomalous)
        v = rng.uniform() + 0.2;
    const double base = roc_auc(normal, anomalous).auc;

    auto transform = [](std::vector<double> v) {
        for (double& x : v)
            x = std::exp(3.0 * x) - 7.0;
        return v;
    };
    CHECK(roc_auc(transform(normal), transform(anomalous)).auc == doctest::Approx(base));
}

TEST_CASE("roc_curve runs from (0,0) to (1,1)") {
    const auto points =
        roc_curve(std::vector<double>{0.1, 0.4, 0.2}, std::vector<double>{0.3, 0.5});
    REQUIRE(points.size() >= 2);
    CHECK(points.front() == std::pair{0.0, 0.0});
    CHECK(points.back() == std::pair{1.0, 1.0});
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].first >= points[i - 1].first);
        CHECK(points[i].second >= points[i - 1].second);
    }
}

TEST_CASE("aggregate computes mean and sample standard deviation") {
    const auto flat = aggregate(std::vector<double>{1.0, 1.0, 1.0}, ConfigId{});
    CHECK(flat.mean == doctest::Approx(1.0));
    CHECK(flat.stddev == doctest::Approx(0.0));

    const auto pair = aggregate(std::vector<double>{0.9, 1.0}, ConfigId{});
    CHECK(pair.mean == doctest::Approx(0.95));
    CHECK(pair.stddev == doctest::Approx(0.070710678118654752));

    CHECK_THROWS_AS(aggregate(std::vector<double>{0.5}, ConfigId{}), InvalidArgument);
}

TEST_CASE("select_best maximizes mean AUC with the resource tie-break") {
    std::vector<AucSummary> summaries;
    summaries.push_back(aggregate(std::vector<double>{0.97, 0.97}, ConfigId{"a", 2, 2, 26}));
    CHECK(select_best(summaries) == 0);

    summaries.push_back(aggregate(std::vector<double>{0.99, 0.99}, ConfigId{"b", 2, 4, 50}));
    summaries.push_back(aggregate(std::vector<double>{0.98, 0.98}, ConfigId{"c", 3, 2, 39}));
    CHECK(select_best(summaries) == 1);

    // equal means: the 14-parameter config wins over the 26-parameter one
    std::vector<AucSummary> tied;
    tied.push_back(aggregate(std::vector<double>{0.9, 0.9}, ConfigId{"big", 2, 6, 26}));
    tied.push_back(aggregate(std::vector<double>{0.9, 0.9}, ConfigId{"small", 2, 1, 14}));
    CHECK(select_best(tied) == 1);

    CHECK_THROWS_AS(select_best(std::vector<AucSummary>{}), InvalidArgument);
}

TEST_CASE("rank_samples orders by score with stable ties") {
    TrainedModel model;
    model.encoding = EncodingKind::amplitude();
    AnsatzConfig config;
    config.n_qubits = 2;
    config.n_trash = 1;
    config.layers = 1;
    model.circuit = build_circuit(config);
    model.cost_kind = CostKind::hamming();
    model.params.assign(static_cast<std::size_t>(model.circuit.n_params), 0.0);

    // Trash qubit is qubit 1 (least significant bit): basis |x0 x1>.
    // scores: |00> -> 0, |01> -> 1, |10> -> 0, |11> -> 1.
    const std::vector<PixelVector> samples = {
        {1, 0, 0, 0}, // 0
        {0, 1, 0, 0}, // 1
        {0, 0, 1, 0}, // 0
        {0, 0, 0, 1}, // 1
    };

    const auto extremes = rank_samples(model, samples, 2);
    REQUIRE(extremes.lowest.size() == 2);
    REQUIRE(extremes.highest.size() == 2);
    CHECK(extremes.lowest[0].index == 0); // stable: first zero-score sample
    CHECK(extremes.lowest[1].index == 2);
    CHECK(extremes.highest[0].index == 1);
    CHECK(extremes.highest[1].index == 3);
    CHECK(extremes.lowest[0].score == doctest::Approx(0.0));
    CHECK(extremes.highest[1].score == doctest::Approx(1.0));

    const auto all = rank_samples(model, samples, 4);
    CHECK(all.lowest.size() == 4);
    CHECK(all.highest.size() == 4);
    CHECK(all.lowest[0].score <= all.lowest[3].score);

    CHECK_THROWS_AS(rank_samples(model, samples, 5), InvalidArgument);
}
