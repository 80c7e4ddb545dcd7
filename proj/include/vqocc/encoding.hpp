#pragma once

#include "vqocc/qsim.hpp"

#include <span>
#include <vector>

namespace vqocc {

// Raw feature vector: nonnegative pixel intensities, row-major.
using PixelVector = std::vector<double>;

enum class EncodingVariant { Amplitude, Frqi };

struct EncodingKind {
    EncodingVariant variant = EncodingVariant::Amplitude;
    // Intensity that maps to the angle pi/2; Frqi only.
    double pixel_max = 1.0;

    static EncodingKind amplitude() { return {EncodingVariant::Amplitude, 1.0}; }
    static EncodingKind frqi(double pixel_max) {
        return {EncodingVariant::Frqi, pixel_max};
    }
};

// |phi(x)> = (1/||x||) sum_i x_i |i>. Length must be a power of two >= 2 and
// the vector must be nonzero.
Statevector amplitude_encode(std::span<const double> x);

// FRQI state over 2m+1 qubits for 4^m pixels: the color qubit (qubit 0, most
// significant) carries cos/sin of theta_i = (x_i / pixel_max) * pi/2 tensored
// with the pixel-index basis state |i>.
Statevector frqi_encode(std::span<const double> x, double pixel_max);

// Qubits needed to encode n_pixels under `kind`.
int required_qubits(const EncodingKind& kind, int n_pixels);

// Dispatch on kind.variant.
Statevector encode(const EncodingKind& kind, std::span<const double> x);

} // namespace vqocc
