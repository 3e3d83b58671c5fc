#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "oracles.hpp"
#include "qjet/rng.hpp"
#include "qjet/sim.hpp"

using namespace qjet;

TEST_CASE("rng streams are deterministic and derivable") {
    RngStream a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CHECK(a.next_u64() != c.next_u64());

    RngStream base(7);
    RngStream d1 = base.derive(1, 0);
    RngStream d2 = base.derive(2, 0);
    RngStream d1_again = base.derive(1, 0);
    CHECK(d1.next_u64() == d1_again.next_u64());
    CHECK(d1.next_u64() != d2.next_u64());

    RngStream u(9);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("gate_matrix conventions") {
    const ComplexMatrix rx0 = gate_matrix(Gate::rx(0.0, 0));
    CHECK(max_abs_diff(rx0, ComplexMatrix::identity(2)) < 1e-15);

    const ComplexMatrix rxpi = gate_matrix(Gate::rx(std::numbers::pi, 0));
    CHECK(std::abs(rxpi(0, 0)) < 1e-15);
    CHECK(std::abs(rxpi(0, 1) - cdouble{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(rxpi(1, 0) - cdouble{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(rxpi(1, 1)) < 1e-15);

    RngStream rng(5);
    for (int i = 0; i < 10; ++i) {
        const double theta = 10.0 * (rng.uniform() - 0.5);
        const ComplexMatrix prod =
            matmul(gate_matrix(Gate::rz(theta, 0)), gate_matrix(Gate::rz(-theta, 0)));
        CHECK(max_abs_diff(prod, ComplexMatrix::identity(2)) < 1e-12);
    }

    const ComplexMatrix cn = gate_matrix(Gate::cnot(0, 1));
    ComplexMatrix expected = ComplexMatrix::identity(4);
    expected(2, 2) = 0.0;
    expected(3, 3) = 0.0;
    expected(2, 3) = 1.0;
    expected(3, 2) = 1.0;
    CHECK(max_abs_diff(cn, expected) == 0.0);
}

TEST_CASE("apply_gate on basis states") {
    StateVector zero(1);
    const StateVector flipped = apply_gate(zero, Gate::rx(std::numbers::pi, 0));
    CHECK(std::abs(flipped.amplitudes()[0]) < 1e-15);
    CHECK(std::abs(flipped.amplitudes()[1] - cdouble{0.0, -1.0}) < 1e-15);

    // |10> -> |11> under CNOT(0, 1); qubit 0 is the high bit.
    ComplexVector amps(4);
    amps[2] = 1.0;
    StateVector s(2, amps);
    const StateVector t = apply_gate(s, Gate::cnot(0, 1));
    CHECK(std::abs(t.amplitudes()[3] - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(t.amplitudes()[2]) < 1e-15);

    CHECK_THROWS_AS(apply_gate(s, Gate::rx(0.3, 2)), std::out_of_range);
}

TEST_CASE("apply_gate matches the kron-lift oracle") {
    RngStream rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const size_t n = 3 + rng.uniform_below(3);  // 3..5 qubits
        const StateVector state = oracle::random_state(n, rng);

        Gate g = Gate::rx(0.0, 0);
        switch (rng.uniform_below(4)) {
            case 0: g = Gate::rx(6.0 * (rng.uniform() - 0.5), rng.uniform_below(n)); break;
            case 1: g = Gate::ry(6.0 * (rng.uniform() - 0.5), rng.uniform_below(n)); break;
            case 2: g = Gate::rz(6.0 * (rng.uniform() - 0.5), rng.uniform_below(n)); break;
            default: {
                const size_t control = rng.uniform_below(n);
                size_t target = rng.uniform_below(n);
                while (target == control) target = rng.uniform_below(n);
                g = Gate::cnot(control, target);
                break;
            }
        }

        const StateVector fast = apply_gate(state, g);
        const ComplexVector slow =
            oracle::dense_apply(oracle::lift_gate(g, n), state.amplitudes());
        for (size_t i = 0; i < slow.size(); ++i) {
            CHECK(std::abs(fast.amplitudes()[i] - slow[i]) < 1e-12);
        }
    }
}

TEST_CASE("apply_circuit basics and oracle equivalence") {
    RngStream rng(7);
    const StateVector state = oracle::random_state(4, rng);

    Circuit empty;
    empty.num_qubits = 4;
    const StateVector same = apply_circuit(state, empty);
    for (size_t i = 0; i < state.dim(); ++i) {
        CHECK(same.amplitudes()[i] == state.amplitudes()[i]);
    }

    // Random circuit, then its gate-wise inverse in reverse order.
    Circuit c;
    c.num_qubits = 4;
    for (int i = 0; i < 20; ++i) {
        const size_t q = rng.uniform_below(4);
        switch (rng.uniform_below(4)) {
            case 0: c.gates.push_back(Gate::rx(6.0 * (rng.uniform() - 0.5), q)); break;
            case 1: c.gates.push_back(Gate::ry(6.0 * (rng.uniform() - 0.5), q)); break;
            case 2: c.gates.push_back(Gate::rz(6.0 * (rng.uniform() - 0.5), q)); break;
            default: c.gates.push_back(Gate::cnot(q, (q + 1) % 4)); break;
        }
    }
    Circuit inverse;
    inverse.num_qubits = 4;
    for (size_t i = c.gates.size(); i-- > 0;) {
        const Gate& g = c.gates[i];
        inverse.gates.push_back(g.is_rotation() ? g.with_angle(-g.angle) : g);
    }
    StateVector roundtrip = apply_circuit(apply_circuit(state, c), inverse);
    for (size_t i = 0; i < state.dim(); ++i) {
        CHECK(std::abs(roundtrip.amplitudes()[i] - state.amplitudes()[i]) < 1e-10);
    }
    CHECK(std::abs(roundtrip.norm_squared() - 1.0) < 1e-10);

    const StateVector fast = apply_circuit(state, c);
    const ComplexVector slow =
        oracle::dense_apply(oracle::circuit_matrix(c), state.amplitudes());
    for (size_t i = 0; i < slow.size(); ++i) {
        CHECK(std::abs(fast.amplitudes()[i] - slow[i]) < 1e-10);
    }
}

TEST_CASE("expectation_z") {
    StateVector zero(3);
    CHECK(expectation_z(zero, 0) == doctest::Approx(1.0).epsilon(1e-15));

    RngStream rng(8);
    for (int i = 0; i < 10; ++i) {
        const double theta = 6.0 * (rng.uniform() - 0.5);
        StateVector s(1);
        apply_gate_inplace(s, Gate::rx(theta, 0));
        CHECK(expectation_z(s, 0) == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    }

    for (int i = 0; i < 10; ++i) {
        const StateVector s = oracle::random_state(4, rng);
        for (size_t q = 0; q < 4; ++q) {
            CHECK(std::abs(expectation_z(s, q) - oracle::z_expectation_density(s, q)) < 1e-12);
        }
    }
}

TEST_CASE("norm preserved across long random gate sequences") {
    RngStream rng(9);
    StateVector s = oracle::random_state(5, rng);
    for (int i = 0; i < 1000; ++i) {
        const size_t q = rng.uniform_below(5);
        switch (rng.uniform_below(4)) {
            case 0: apply_gate_inplace(s, Gate::rx(6.0 * (rng.uniform() - 0.5), q)); break;
            case 1: apply_gate_inplace(s, Gate::ry(6.0 * (rng.uniform() - 0.5), q)); break;
            case 2: apply_gate_inplace(s, Gate::rz(6.0 * (rng.uniform() - 0.5), q)); break;
            default: apply_gate_inplace(s, Gate::cnot(q, (q + 1) % 5)); break;
        }
    }
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
}

TEST_CASE("haar_unitary is unitary and deterministic per seed") {
    RngStream rng(10);
    const ComplexMatrix u1 = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

    for (const size_t dim : {2, 4, 16}) {
        const ComplexMatrix u = haar_unitary(dim, rng);
        CHECK(unitarity_error(u) < 1e-12);
    }

    RngStream s1(123), s2(123);
    const ComplexMatrix a = haar_unitary(8, s1);
    const ComplexMatrix b = haar_unitary(8, s2);
    CHECK(std::memcmp(a.entries().data(), b.entries().data(),
                      a.entries().size() * sizeof(cdouble)) == 0);
}

TEST_CASE("haar_unitary first-entry statistics at dim 4") {
    RngStream rng(99);
    double acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const ComplexMatrix u = haar_unitary(4, rng);
        acc += std::norm(u(0, 0));
    }
    CHECK(std::abs(acc / draws - 0.25) < 0.01);
}
