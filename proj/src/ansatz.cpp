#include "vqocc/ansatz.hpp"

#include "vqocc/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace vqocc {

void AnsatzConfig::validate() const {
    if (n_qubits < 2 || n_qubits > Statevector::kMaxQubits)
        throw InvalidArgument("ansatz: n_qubits must be in [2, " +
                              std::to_string(Statevector::kMaxQubits) + "], got " +
                              std::to_string(n_qubits));
    if (n_trash < 1 || n_trash >= n_qubits)
        throw InvalidArgument("ansatz: need 1 <= n_trash < n_qubits, got n_trash=" +
                              std::to_string(n_trash) + ", n_qubits=" +
                              std::to_string(n_qubits));
    if (layers < 1)
        throw InvalidArgument("ansatz: layers must be >= 1, got " + std::to_string(layers));
    if (!trash_qubits.empty()) {
        if (static_cast<int>(trash_qubits.size()) != n_trash)
            throw InvalidArgument("ansatz: trash_qubits override must list exactly n_trash "
                                  "indices");
        std::set<int> seen;
        for (int q : trash_qubits) {
            if (q < 0 || q >= n_qubits)
                throw InvalidArgument("ansatz: trash qubit index " + std::to_string(q) +
                                      " out of range");
            if (!seen.insert(q).second)
                throw InvalidArgument("ansatz: duplicate trash qubit index " +
                                      std::to_string(q));
        }
    }
}

std::vector<int> AnsatzConfig::resolved_trash() const {
    std::vector<int> trash;
    if (trash_qubits.empty()) {
        for (int q = n_qubits - n_trash; q < n_qubits; ++q)
            trash.push_back(q);
    } else {
        trash = trash_qubits;
        std::sort(trash.begin(), trash.end());
    }
    return trash;
}

std::vector<int> AnsatzConfig::resolved_latent() const {
    const auto trash = resolved_trash();
    std::vector<int> latent;
    for (int q = 0; q < n_qubits; ++q) {
        if (!std::binary_search(trash.begin(), trash.end(), q))
            latent.push_back(q);
    }
    return latent;
}

int param_count(const AnsatzConfig& config) {
    config.validate();
    return config.n_trash * (config.n_qubits * config.layers + 1);
}

int two_qubit_count(const AnsatzConfig& config) {
    config.validate();
    const int nt = config.n_trash;
    const int n = config.n_qubits;
    return ((nt * nt * nt - 3 * nt * nt) / 2 + n * nt) * config.layers;
}

int depth(const AnsatzConfig& config) {
    config.validate();
    const int nt = config.n_trash;
    const int n = config.n_qubits;
    return 1 + ((nt * nt * nt - 3 * nt * nt) / 2 + n * nt + nt) * config.layers;
}

CircuitDescriptor build_circuit(const AnsatzConfig& config) {
    config.validate();
    const auto trash = config.resolved_trash();
    const auto latent = config.resolved_latent();
    const int nt = config.n_trash;

    CircuitDescriptor circuit;
    circuit.config = config;
    int p = 0;
    for (int layer = 0; layer < config.layers; ++layer) {
        for (int k = 0; k < nt; ++k) {
            for (int q = 0; q < config.n_qubits; ++q)
                circuit.gates.push_back(Gate::ry(q, p++));
            for (int a = 0; a < nt; ++a)
                for (int b = a + 1; b < nt; ++b)
                    circuit.gates.push_back(Gate::cz(trash[a], trash[b]));
            // Rotating latent-trash pairing: sub-block k pairs latent j with
            // trash (j + k) mod n_trash.
            for (std::size_t j = 0; j < latent.size(); ++j)
                circuit.gates.push_back(
                    Gate::cz(latent[j], trash[(j + static_cast<std::size_t>(k)) % nt]));
        }
    }
    for (int tq : trash)
        circuit.gates.push_back(Gate::ry(tq, p++));
    circuit.n_params = p;
    return circuit;
}

int scheduled_depth(const CircuitDescriptor& circuit) {
    int ticks = 0;
    std::uint64_t rotation_tick_qubits = 0; // bit q set: qubit q busy in open Ry tick
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::RotationY) {
            const std::uint64_t bit = std::uint64_t{1} << g.q0;
            if (rotation_tick_qubits == 0 || (rotation_tick_qubits & bit)) {
                ++ticks;
                rotation_tick_qubits = bit;
            } else {
                rotation_tick_qubits |= bit;
            }
        } else {
            ++ticks;
            rotation_tick_qubits = 0;
        }
    }
    return ticks;
}

void apply_circuit(Statevector& state, const CircuitDescriptor& circuit,
                   std::span<const double> params) {
    if (static_cast<int>(params.size()) != circuit.n_params)
        throw InvalidArgument("apply_circuit: expected " + std::to_string(circuit.n_params) +
                              " parameters, got " + std::to_string(params.size()));
    if (state.n_qubits() != circuit.config.n_qubits)
        throw InvalidArgument("apply_circuit: state has " + std::to_string(state.n_qubits()) +
                              " qubits, circuit expects " +
                              std::to_string(circuit.config.n_qubits));
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::RotationY)
            apply_ry(state, g.q0, params[static_cast<std::size_t>(g.param_index)]);
        else
            apply_cz(state, g.q0, g.q1);
    }
}

std::string dump_circuit(const CircuitDescriptor& circuit) {
    std::ostringstream out;
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::RotationY)
            out << "ry q" << g.q0 << " p" << g.param_index << '\n';
        else
            out << "cz q" << g.q0 << " q" << g.q1 << '\n';
    }
    return out.str();
}

} // namespace vqocc
