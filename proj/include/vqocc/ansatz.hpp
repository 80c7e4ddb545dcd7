#pragma once

#include "vqocc/qsim.hpp"

#include <span>
#include <string>
#include <vector>

namespace vqocc {

// Layered trash/latent circuit template. Trash qubits default to the n_trash
// highest indices; `trash_qubits` overrides the placement (the wiring the
// original figure used is not fixed by the resource formulas).
struct AnsatzConfig {
    int n_qubits = 0;
    int n_trash = 0;
    int layers = 0;
    std::vector<int> trash_qubits; // empty -> highest n_trash indices

    // Throws InvalidArgument unless 1 <= n_trash < n_qubits, layers >= 1 and
    // any trash override is a set of distinct in-range indices of size n_trash.
    void validate() const;

    // Sorted trash indices after applying the default.
    std::vector<int> resolved_trash() const;
    // Sorted latent indices (complement of the trash set).
    std::vector<int> resolved_latent() const;
};

// Immutable once built; shareable across threads.
struct CircuitDescriptor {
    AnsatzConfig config;
    std::vector<Gate> gates;
    int n_params = 0;
};

// Closed-form resource counts for a valid config.
int param_count(const AnsatzConfig& config);     // n_t * (n*L + 1)
int two_qubit_count(const AnsatzConfig& config); // ((n_t^3 - 3 n_t^2)/2 + n*n_t) * L
int depth(const AnsatzConfig& config);           // 1 + (two_qubit/L + n_t) * L

// Builds the gate list: L layers of n_trash sub-blocks. Sub-block k applies a
// fresh-parameter Ry to every qubit, then CZ on every trash-trash pair, then
// CZ from latent qubit j to trash qubit (j + k) mod n_trash; a final Ry on
// each trash qubit closes the circuit.
CircuitDescriptor build_circuit(const AnsatzConfig& config);

// Greedy tick count of an explicit gate list: consecutive rotations on
// disjoint qubits share one tick, every CZ takes its own tick. Equals
// depth(config) for every built circuit.
int scheduled_depth(const CircuitDescriptor& circuit);

// Applies the gates in list order; Ry gate i uses params[gates[i].param_index].
void apply_circuit(Statevector& state, const CircuitDescriptor& circuit,
                   std::span<const double> params);

// One gate per line ("ry q3 p7" / "cz q1 q4"), for debugging and golden tests.
std::string dump_circuit(const CircuitDescriptor& circuit);

} // namespace vqocc
