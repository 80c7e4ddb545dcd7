#include "vqocc/qsim.hpp"

#include "vqocc/errors.hpp"

#include <cmath>
#include <string>

namespace vqocc {

namespace {

void check_qubit(const Statevector& state, int qubit, const char* what) {
    if (qubit < 0 || qubit >= state.n_qubits())
        throw InvalidArgument(std::string(what) + ": qubit index " +
                              std::to_string(qubit) + " out of range for " +
                              std::to_string(state.n_qubits()) + " qubits");
}

} // namespace

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw InvalidArgument("statevector: n_qubits must be in [1, " +
                              std::to_string(kMaxQubits) + "], got " +
                              std::to_string(n_qubits));
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = Complex{1.0, 0.0};
}

double Statevector::squared_norm() const {
    double s = 0.0;
    for (const auto& a : amps_)
        s += std::norm(a);
    return s;
}

std::size_t Statevector::bit_stride(int qubit) const {
    return std::size_t{1} << (n_qubits_ - 1 - qubit);
}

Statevector zero_state(int n_qubits) {
    return Statevector(n_qubits);
}

void apply_ry(Statevector& state, int qubit, double angle) {
    check_qubit(state, qubit, "apply_ry");
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    auto& amps = state.amps();
    const std::size_t n = amps.size();
    const std::size_t stride = state.bit_stride(qubit);
    const std::size_t block = stride << 1;
    for (std::size_t base = 0; base < n; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            Complex& a0 = amps[base + off];
            Complex& a1 = amps[base + off + stride];
            const Complex t0 = a0;
            const Complex t1 = a1;
            a0 = c * t0 - s * t1;
            a1 = s * t0 + c * t1;
        }
    }
}

void apply_cz(Statevector& state, int q1, int q2) {
    check_qubit(state, q1, "apply_cz");
    check_qubit(state, q2, "apply_cz");
    if (q1 == q2)
        throw InvalidArgument("apply_cz: qubit indices must be distinct, got " +
                              std::to_string(q1) + " twice");
    auto& amps = state.amps();
    const std::size_t m1 = state.bit_stride(q1);
    const std::size_t m2 = state.bit_stride(q2);
    const std::size_t both = m1 | m2;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & both) == both)
            amps[i] = -amps[i];
    }
}

double expect_z(const Statevector& state, int qubit) {
    check_qubit(state, qubit, "expect_z");
    const auto& amps = state.amps();
    const std::size_t n = amps.size();
    const std::size_t stride = state.bit_stride(qubit);
    const std::size_t block = stride << 1;
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t base = 0; base < n; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            p0 += std::norm(amps[base + off]);
            p1 += std::norm(amps[base + off + stride]);
        }
    }
    return p0 - p1;
}

Complex inner_product(const Statevector& a, const Statevector& b) {
    if (a.size() != b.size())
        throw InvalidArgument("inner_product: dimension mismatch");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

} // namespace vqocc
