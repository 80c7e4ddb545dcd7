#include "vqocc/model.hpp"

#include "vqocc/errors.hpp"
#include "vqocc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace vqocc {

namespace {

constexpr double kPi = std::numbers::pi;

// d(cost)/d<Z_j> for each trash qubit, evaluated at the unshifted state.
// Shared by both gradient engines so they agree to round-off.
std::vector<double> cost_chain_weights(std::span<const double> z, const CostKind& kind) {
    std::vector<double> w(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (kind.variant == CostVariant::HammingLocal) {
            w[j] = -0.5;
        } else {
            const double u = 0.5 * (1.0 - z[j]);
            // Clamped region of log(max(u, floor)) has zero slope.
            w[j] = u > kind.log_floor ? -0.5 / u : 0.0;
        }
    }
    return w;
}

// mu <- d(Ry)/d(theta) applied to `state` on `qubit`; equals (1/2) Ry(theta + pi).
void apply_ry_derivative(Statevector& state, int qubit, double angle) {
    apply_ry(state, qubit, angle + kPi);
    for (auto& a : state.amps())
        a *= 0.5;
}

// state <- (sum_j w_j Z_j) state over the trash qubits; diagonal in the
// computational basis.
void apply_weighted_z(Statevector& state, std::span<const int> trash,
                      std::span<const double> weights) {
    auto& amps = state.amps();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double factor = 0.0;
        for (std::size_t j = 0; j < trash.size(); ++j) {
            const std::size_t stride = state.bit_stride(trash[j]);
            factor += (i & stride) ? -weights[j] : weights[j];
        }
        amps[i] *= factor;
    }
}

std::vector<double> gradient_adjoint(const CircuitDescriptor& circuit,
                                     std::span<const double> params,
                                     const Statevector& input, const CostKind& kind) {
    const auto trash = circuit.config.resolved_trash();

    Statevector ket = input;
    apply_circuit(ket, circuit, params);

    const auto z = trash_z(ket, trash);
    const auto weights = cost_chain_weights(z, kind);

    // bra = H_eff |psi>, with H_eff = sum_j w_j Z_j frozen at the final state.
    Statevector bra = ket;
    apply_weighted_z(bra, trash, weights);

    std::vector<double> grad(params.size(), 0.0);
    Statevector mu = ket; // scratch
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        const Gate& g = *it;
        if (g.kind == GateKind::RotationY) {
            const double angle = params[static_cast<std::size_t>(g.param_index)];
            apply_ry(ket, g.q0, -angle); // undo: Ry^dagger = Ry(-angle)
            mu.amps() = ket.amps();
            apply_ry_derivative(mu, g.q0, angle);
            grad[static_cast<std::size_t>(g.param_index)] +=
                2.0 * inner_product(bra, mu).real();
            apply_ry(bra, g.q0, -angle);
        } else {
            apply_cz(ket, g.q0, g.q1); // CZ is self-inverse
            apply_cz(bra, g.q0, g.q1);
        }
    }
    return grad;
}

std::vector<double> gradient_parameter_shift(const CircuitDescriptor& circuit,
                                             std::span<const double> params,
                                             const Statevector& input,
                                             const CostKind& kind) {
    const auto trash = circuit.config.resolved_trash();

    Statevector unshifted = input;
    apply_circuit(unshifted, circuit, params);
    const auto weights = cost_chain_weights(trash_z(unshifted, trash), kind);

    std::vector<double> shifted(params.begin(), params.end());
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double original = shifted[k];

        shifted[k] = original + kPi / 2.0;
        Statevector plus = input;
        apply_circuit(plus, circuit, shifted);
        const auto z_plus = trash_z(plus, trash);

        shifted[k] = original - kPi / 2.0;
        Statevector minus = input;
        apply_circuit(minus, circuit, shifted);
        const auto z_minus = trash_z(minus, trash);

        shifted[k] = original;
        double g = 0.0;
        for (std::size_t j = 0; j < trash.size(); ++j)
            g += weights[j] * 0.5 * (z_plus[j] - z_minus[j]);
        grad[k] = g;
    }
    return grad;
}

} // namespace

void TrainConfig::validate() const {
    if (learning_rate <= 0.0)
        throw InvalidArgument("train: learning_rate must be positive");
    if (batch_size < 1)
        throw InvalidArgument("train: batch_size must be >= 1");
    if (iterations < 1)
        throw InvalidArgument("train: iterations must be >= 1");
}

std::vector<double> trash_z(const Statevector& state, std::span<const int> trash) {
    std::vector<double> z(trash.size());
    for (std::size_t j = 0; j < trash.size(); ++j)
        z[j] = expect_z(state, trash[j]);
    return z;
}

double cost(const Statevector& state, std::span<const int> trash, const CostKind& kind) {
    if (static_cast<int>(trash.size()) > state.n_qubits())
        throw InvalidArgument("cost: more trash qubits than state qubits");
    double c = 0.0;
    for (int tq : trash) {
        const double z = expect_z(state, tq);
        if (kind.variant == CostVariant::HammingLocal)
            c += 0.5 * (1.0 - z);
        else
            c += std::log(std::max(0.5 * (1.0 - z), kind.log_floor));
    }
    return c;
}

std::vector<double> gradient(const CircuitDescriptor& circuit,
                             std::span<const double> params,
                             std::span<const Statevector> batch,
                             const CostKind& kind, GradientEngine engine) {
    if (batch.empty())
        throw InvalidArgument("gradient: batch must be nonempty");
    if (static_cast<int>(params.size()) != circuit.n_params)
        throw InvalidArgument("gradient: parameter count mismatch");

    std::vector<double> acc(params.size(), 0.0);
    for (const Statevector& sample : batch) {
        const auto g = engine == GradientEngine::Adjoint
                           ? gradient_adjoint(circuit, params, sample, kind)
                           : gradient_parameter_shift(circuit, params, sample, kind);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& v : acc)
        v *= inv;
    return acc;
}

TrainedModel train(std::span<const Statevector> train_set,
                   const CircuitDescriptor& circuit, const CostKind& kind,
                   const TrainConfig& cfg, const EncodingKind& encoding) {
    cfg.validate();
    if (train_set.empty())
        throw InvalidArgument("train: training set must be nonempty");

    const auto trash = circuit.config.resolved_trash();
    const std::size_t n_params = static_cast<std::size_t>(circuit.n_params);

    Rng init_rng(derive_seed(cfg.seed, "param-init"));
    std::vector<double> params(n_params);
    for (double& p : params)
        p = init_rng.uniform_angle();

    Rng batch_rng(derive_seed(cfg.seed, "batch-shuffle"));
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> m(n_params, 0.0);
    std::vector<double> v(n_params, 0.0);
    long step = 0;

    const long target_updates =
        cfg.count_updates
            ? cfg.iterations
            : static_cast<long>(cfg.iterations) *
                  ((train_set.size() + cfg.batch_size - 1) / cfg.batch_size);

    std::vector<Statevector> batch;
    std::vector<double> curve;
    const auto mean_cost = [&] {
        double total = 0.0;
        for (const Statevector& sample : train_set) {
            Statevector out = sample;
            apply_circuit(out, circuit, params);
            total += cost(out, trash, kind);
        }
        return total / static_cast<double>(train_set.size());
    };

    while (step < target_updates) {
        batch_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size() && step < target_updates;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(train_set[order[i]]);

            const auto grad =
                gradient(circuit, params, batch, kind, GradientEngine::Adjoint);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            for (std::size_t k = 0; k < n_params; ++k) {
                m[k] = cfg.adam_beta1 * m[k] + (1.0 - cfg.adam_beta1) * grad[k];
                v[k] = cfg.adam_beta2 * v[k] + (1.0 - cfg.adam_beta2) * grad[k] * grad[k];
                const double m_hat = m[k] / bc1;
                const double v_hat = v[k] / bc2;
                params[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
            }
        }
        curve.push_back(mean_cost());
    }

    return TrainedModel{encoding, circuit, kind, std::move(params), std::move(curve)};
}

double score(const TrainedModel& model, std::span<const double> x) {
    return score_encoded(model, encode(model.encoding, x));
}

double score_encoded(const TrainedModel& model, const Statevector& encoded) {
    Statevector out = encoded;
    apply_circuit(out, model.circuit, model.params);
    return cost(out, model.circuit.config.resolved_trash(), model.cost_kind);
}

Label classify(double score, double threshold, std::uint64_t tie_seed) {
    if (score < threshold)
        return Label::Normal;
    if (score > threshold)
        return Label::Anomalous;
    std::uint64_t state = tie_seed;
    return (splitmix64(state) >> 63) ? Label::Anomalous : Label::Normal;
}

} // namespace vqocc
