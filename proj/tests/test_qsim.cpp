#include "vqocc/qsim.hpp"

#include "test_helpers.hpp"
#include "vqocc/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace vqocc;
using namespace vqocc::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("zero_state is |0...0>") {
    const auto one = zero_state(1);
    CHECK(one.size() == 2);
    CHECK(one[0] == Complex{1, 0});
    CHECK(one[1] == Complex{0, 0});

    const auto two = zero_state(2);
    CHECK(two.size() == 4);
    CHECK(two[0] == Complex{1, 0});
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(two[i] == Complex{0, 0});
}

TEST_CASE("zero_state rejects out-of-range qubit counts") {
    CHECK_THROWS_AS(zero_state(0), InvalidArgument);
    CHECK_THROWS_AS(zero_state(-1), InvalidArgument);
    CHECK_THROWS_AS(zero_state(13), InvalidArgument);
}

TEST_CASE("apply_ry analytic cases on one qubit") {
    auto s = zero_state(1);
    apply_ry(s, 0, kPi);
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(std::abs(s[1] - Complex{1, 0}) < 1e-15);

    auto half = zero_state(1);
    apply_ry(half, 0, kPi / 2);
    CHECK(std::abs(half[0] - Complex{1 / std::sqrt(2.0), 0}) < 1e-15);
    CHECK(std::abs(half[1] - Complex{1 / std::sqrt(2.0), 0}) < 1e-15);
}

TEST_CASE("apply_ry with angle 0 is the identity") {
    auto s = random_state(3, 99);
    const auto before = s;
    apply_ry(s, 1, 0.0);
    CHECK(max_amp_diff(s, before) == 0.0);
}

TEST_CASE("apply_ry validates the qubit index") {
    auto s = zero_state(2);
    CHECK_THROWS_AS(apply_ry(s, 2, 0.1), InvalidArgument);
    CHECK_THROWS_AS(apply_ry(s, -1, 0.1), InvalidArgument);
}

TEST_CASE("apply_cz negates exactly the |..1..1..> amplitudes") {
    // |11> on two qubits
    auto s = zero_state(2);
    s[0] = Complex{0, 0};
    s[3] = Complex{1, 0};
    apply_cz(s, 0, 1);
    CHECK(s[3] == Complex{-1, 0});

    // |10> unchanged
    auto t = zero_state(2);
    t[0] = Complex{0, 0};
    t[2] = Complex{1, 0}; // qubit 0 (MSB) = 1, qubit 1 = 0
    apply_cz(t, 0, 1);
    CHECK(t[2] == Complex{1, 0});
}

TEST_CASE("apply_cz is symmetric in its qubit arguments") {
    auto a = random_state(4, 7);
    auto b = a;
    apply_cz(a, 1, 3);
    apply_cz(b, 3, 1);
    CHECK(max_amp_diff(a, b) == 0.0);
}

TEST_CASE("apply_cz rejects equal or out-of-range indices") {
    auto s = zero_state(3);
    CHECK_THROWS_AS(apply_cz(s, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(apply_cz(s, 0, 3), InvalidArgument);
}

TEST_CASE("expect_z basis and superposition cases") {
    auto zero = zero_state(1);
    CHECK(expect_z(zero, 0) == doctest::Approx(1.0));

    auto one = zero_state(1);
    apply_ry(one, 0, kPi);
    CHECK(expect_z(one, 0) == doctest::Approx(-1.0));

    auto plus = zero_state(1);
    apply_ry(plus, 0, kPi / 2);
    CHECK(expect_z(plus, 0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(expect_z(zero, 1), InvalidArgument);
}

TEST_CASE("norm is preserved by random gate sequences") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto s = random_state(4, 1000 + seed);
        Rng rng(seed);
        for (int g = 0; g < 50; ++g) {
            if (rng.uniform() < 0.5) {
                apply_ry(s, static_cast<int>(rng.uniform_below(4)), rng.uniform_angle());
            } else {
                const int q1 = static_cast<int>(rng.uniform_below(4));
                const int q2 = (q1 + 1 + static_cast<int>(rng.uniform_below(3))) % 4;
                apply_cz(s, q1, q2);
            }
        }
        CHECK(std::abs(s.squared_norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("gates are unitary: Ry(t) Ry(-t) and CZ CZ restore the state") {
    auto s = random_state(3, 55);
    const auto before = s;
    apply_ry(s, 2, 1.234);
    apply_ry(s, 2, -1.234);
    CHECK(max_amp_diff(s, before) < 1e-10);

    apply_cz(s, 0, 2);
    apply_cz(s, 0, 2);
    CHECK(max_amp_diff(s, before) < 1e-10);
}

TEST_CASE("expect_z lies in [-1, 1] for random unit states") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_state(5, 4000 + seed);
        for (int q = 0; q < 5; ++q) {
            const double z = expect_z(s, q);
            CHECK(z >= -1.0);
            CHECK(z <= 1.0);
        }
    }
}

TEST_CASE("gate kernels match explicit matrix multiplication up to n=4") {
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto input = random_state(n, 600 + static_cast<std::uint64_t>(n) * 10 + seed);
            Rng rng(seed + 31);

            // Ry on a random qubit
            const int q = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
            const double theta = rng.uniform_angle();
            const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
            const Matrix ry = {{Complex{c, 0}, Complex{-sn, 0}},
                               {Complex{sn, 0}, Complex{c, 0}}};
            auto kernel_out = input;
            apply_ry(kernel_out, q, theta);
            const auto dense_out = matvec(embed_1q(ry, q, n), input);
            CHECK(max_amp_diff(kernel_out, dense_out) < 1e-12);

            if (n >= 2) {
                const int a = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
                const int b =
                    (a + 1 +
                     static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)))) %
                    n;
                // CZ = I - 2 P1(a) P1(b), built from embedded projectors.
                const Matrix p1 = {{Complex{0, 0}, Complex{0, 0}},
                                   {Complex{0, 0}, Complex{1, 0}}};
                const auto pa = embed_1q(p1, a, n);
                const auto pb = embed_1q(p1, b, n);
                Matrix cz = identity_matrix(std::size_t{1} << n);
                for (std::size_t i = 0; i < cz.size(); ++i)
                    for (std::size_t j = 0; j < cz.size(); ++j) {
                        Complex prod{0, 0};
                        for (std::size_t k = 0; k < cz.size(); ++k)
                            prod += pa[i][k] * pb[k][j];
                        cz[i][j] -= 2.0 * prod;
                    }
                auto cz_kernel = input;
                apply_cz(cz_kernel, a, b);
                const auto cz_dense = matvec(cz, input);
                CHECK(max_amp_diff(cz_kernel, cz_dense) < 1e-12);
            }
        }
    }
}

TEST_CASE("inner_product conjugates the left argument") {
    auto a = zero_state(1);
    auto b = zero_state(1);
    a[0] = Complex{0, 1};
    b[0] = Complex{1, 0};
    CHECK(inner_product(a, b) == Complex{0, -1});
    CHECK_THROWS_AS(inner_product(zero_state(1), zero_state(2)), InvalidArgument);
}
