#pragma once

#include "vqocc/ansatz.hpp"
#include "vqocc/encoding.hpp"
#include "vqocc/qsim.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vqocc {

enum class CostVariant { HammingLocal, LogLocal };

struct CostKind {
    CostVariant variant = CostVariant::HammingLocal;
    // Clamp for the log cost; keeps it finite when a trash qubit reaches |0>.
    double log_floor = 1e-12;

    static CostKind hamming() { return {CostVariant::HammingLocal, 1e-12}; }
    static CostKind log_loss(double floor = 1e-12) {
        return {CostVariant::LogLocal, floor};
    }
};

struct TrainConfig {
    double learning_rate = 0.1;
    int batch_size = 10;
    // Optimization iterations; epochs (full passes) by default, raw Adam
    // updates when count_updates is set.
    int iterations = 150;
    bool count_updates = false;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class GradientEngine { ParameterShift, Adjoint };

struct TrainedModel {
    EncodingKind encoding;
    CircuitDescriptor circuit;
    CostKind cost_kind;
    std::vector<double> params;
    // Mean full-training-set cost after each epoch (each pass for update
    // counting).
    std::vector<double> training_curve;
};

// Per-qubit Pauli-Z expectations over the given trash indices.
std::vector<double> trash_z(const Statevector& state, std::span<const int> trash);

// HammingLocal: (1/2) sum_j (1 - <Z_j>), in [0, n_t].
// LogLocal: sum_j log(max((1 - <Z_j>)/2, log_floor)), in [n_t*log(floor), 0].
double cost(const Statevector& state, std::span<const int> trash, const CostKind& kind);

// d(mean batch cost)/d(theta). Both engines are exact; ParameterShift uses
// two shifted evaluations per parameter, Adjoint uses O(gates) state sweeps.
std::vector<double> gradient(const CircuitDescriptor& circuit,
                             std::span<const double> params,
                             std::span<const Statevector> batch,
                             const CostKind& kind, GradientEngine engine);

// Trains from uniform [0, 2pi) initial parameters with mini-batch Adam.
// Deterministic given (train_set, circuit, kind, cfg).
TrainedModel train(std::span<const Statevector> train_set,
                   const CircuitDescriptor& circuit, const CostKind& kind,
                   const TrainConfig& cfg, const EncodingKind& encoding);

// Anomaly score of a raw sample: encode, run the circuit, evaluate the cost.
// Larger = more anomalous.
double score(const TrainedModel& model, std::span<const double> x);

// Scores an already-encoded state.
double score_encoded(const TrainedModel& model, const Statevector& encoded);

enum class Label { Normal, Anomalous };

// score < threshold -> Normal, score > threshold -> Anomalous, tie -> seeded
// fair coin.
Label classify(double score, double threshold, std::uint64_t tie_seed);

} // namespace vqocc
