#include "vqocc/encoding.hpp"

#include "vqocc/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vqocc {

namespace {

// Returns log2(n) if n is a power of two >= 2, else -1.
int exact_log2(std::size_t n) {
    if (n < 2 || (n & (n - 1)) != 0)
        return -1;
    int b = 0;
    while ((std::size_t{1} << b) < n)
        ++b;
    return b;
}

} // namespace

Statevector amplitude_encode(std::span<const double> x) {
    const int n_qubits = exact_log2(x.size());
    if (n_qubits < 0)
        throw InvalidArgument("amplitude_encode: length must be a power of two >= 2, got " +
                              std::to_string(x.size()));
    double sq = 0.0;
    for (double v : x)
        sq += v * v;
    if (sq <= 0.0)
        throw DegenerateInput("amplitude_encode: zero vector cannot be normalized");
    const double inv_norm = 1.0 / std::sqrt(sq);
    Statevector state(n_qubits);
    for (std::size_t i = 0; i < x.size(); ++i)
        state[i] = Complex{x[i] * inv_norm, 0.0};
    return state;
}

Statevector frqi_encode(std::span<const double> x, double pixel_max) {
    if (pixel_max <= 0.0)
        throw InvalidArgument("frqi_encode: pixel_max must be positive");
    const int bits = exact_log2(x.size());
    if (bits < 0 || bits % 2 != 0)
        throw InvalidArgument("frqi_encode: pixel count must be 4^m with m >= 1, got " +
                              std::to_string(x.size()));
    const int m = bits / 2;
    const std::size_t n_pixels = x.size();
    for (std::size_t i = 0; i < n_pixels; ++i) {
        if (x[i] < 0.0 || x[i] > pixel_max)
            throw InvalidArgument("frqi_encode: pixel " + std::to_string(i) + " value " +
                                  std::to_string(x[i]) + " outside [0, " +
                                  std::to_string(pixel_max) + "]");
    }
    Statevector state(2 * m + 1);
    const double scale = 1.0 / static_cast<double>(std::size_t{1} << m);
    for (std::size_t i = 0; i < n_pixels; ++i) {
        const double theta = (x[i] / pixel_max) * (std::numbers::pi / 2.0);
        // Color qubit is the most significant bit: |0>|i> at index i,
        // |1>|i> at index n_pixels + i.
        state[i] = Complex{std::cos(theta) * scale, 0.0};
        state[n_pixels + i] = Complex{std::sin(theta) * scale, 0.0};
    }
    return state;
}

int required_qubits(const EncodingKind& kind, int n_pixels) {
    const int bits = n_pixels > 0 ? exact_log2(static_cast<std::size_t>(n_pixels)) : -1;
    switch (kind.variant) {
    case EncodingVariant::Amplitude:
        if (bits < 1)
            throw InvalidArgument("required_qubits: amplitude encoding needs a power-of-two "
                                  "pixel count >= 2, got " + std::to_string(n_pixels));
        return bits;
    case EncodingVariant::Frqi:
        if (bits < 2 || bits % 2 != 0)
            throw InvalidArgument("required_qubits: FRQI needs a 4^m pixel count, got " +
                                  std::to_string(n_pixels));
        return bits + 1;
    }
    throw InvalidArgument("required_qubits: unknown encoding variant");
}

Statevector encode(const EncodingKind& kind, std::span<const double> x) {
    switch (kind.variant) {
    case EncodingVariant::Amplitude:
        return amplitude_encode(x);
    case EncodingVariant::Frqi:
        return frqi_encode(x, kind.pixel_max);
    }
    throw InvalidArgument("encode: unknown encoding variant");
}

} // namespace vqocc
