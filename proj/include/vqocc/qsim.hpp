#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vqocc {

using Complex = std::complex<double>;

// Dense statevector over n qubits. Qubit k corresponds to bit (n-1-k) of the
// basis index, i.e. qubit 0 is the MOST significant bit, so the tensor
// product |q0> (x) |q1> (x) ... reads left to right.
class Statevector {
  public:
    static constexpr int kMaxQubits = 12;

    // Constructs |0...0>.
    explicit Statevector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    std::vector<Complex>& amps() { return amps_; }
    const std::vector<Complex>& amps() const { return amps_; }

    Complex& operator[](std::size_t i) { return amps_[i]; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    // Sum of squared magnitudes; 1 within 1e-10 for any valid state.
    double squared_norm() const;

    // Stride of the index bit owned by `qubit` (qubit 0 = MSB).
    std::size_t bit_stride(int qubit) const;

  private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

Statevector zero_state(int n_qubits);

// Single-qubit y-rotation, matrix [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]].
// Applied in place over the full vector.
void apply_ry(Statevector& state, int qubit, double angle);

// Controlled-Z: negates amplitudes of basis states where both qubits are 1.
void apply_cz(Statevector& state, int q1, int q2);

// Pauli-Z expectation of one qubit: sum_i |a_i|^2 * (+1 if bit is 0 else -1).
double expect_z(const Statevector& state, int qubit);

// <a|b>; states must have equal dimension.
Complex inner_product(const Statevector& a, const Statevector& b);

namespace gates {

enum class GateKind { RotationY, ControlledZ };

// One circuit element. RotationY uses q0 and param_index; ControlledZ uses
// q0 < q1 and leaves param_index at -1.
struct Gate {
    GateKind kind;
    int q0;
    int q1 = -1;
    int param_index = -1;

    static Gate ry(int qubit, int param_index) {
        return Gate{GateKind::RotationY, qubit, -1, param_index};
    }
    static Gate cz(int a, int b) {
        return Gate{GateKind::ControlledZ, a < b ? a : b, a < b ? b : a, -1};
    }

    bool operator==(const Gate&) const = default;
};

} // namespace gates

using gates::Gate;
using gates::GateKind;

} // namespace vqocc
