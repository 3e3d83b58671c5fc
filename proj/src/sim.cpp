#include "qjet/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "qjet/linalg.hpp"

namespace qjet {

StateVector::StateVector(size_t num_qubits)
    : num_qubits_(num_qubits), amplitudes_(size_t{1} << num_qubits) {
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(size_t num_qubits, ComplexVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (size_t{1} << num_qubits_)) {
        throw std::invalid_argument("StateVector: amplitude count must be 2^num_qubits");
    }
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
}

void StateVector::normalize() {
    const double n2 = norm_squared();
    if (n2 <= 0.0) {
        throw std::runtime_error("StateVector::normalize: zero norm");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes_) a *= inv;
}

Gate Gate::rx(double angle, size_t target) { return {GateKind::Rx, angle, target, 0, {}}; }
Gate Gate::ry(double angle, size_t target) { return {GateKind::Ry, angle, target, 0, {}}; }
Gate Gate::rz(double angle, size_t target) { return {GateKind::Rz, angle, target, 0, {}}; }

Gate Gate::cnot(size_t control, size_t target) {
    if (control == target) {
        throw std::invalid_argument("Gate::cnot: control and target must differ");
    }
    return {GateKind::Cnot, 0.0, target, control, {}};
}

Gate Gate::full_unitary(ComplexMatrix matrix) {
    if (!matrix.is_square()) {
        throw std::invalid_argument("Gate::full_unitary: matrix must be square");
    }
    if (unitarity_error(matrix) > 1e-10) {
        throw std::invalid_argument("Gate::full_unitary: matrix is not unitary");
    }
    Gate g{GateKind::FullUnitary, 0.0, 0, 0, std::move(matrix)};
    return g;
}

Gate Gate::with_angle(double new_angle) const {
    if (!is_rotation()) {
        throw std::invalid_argument("Gate::with_angle: gate has no angle parameter");
    }
    Gate g = *this;
    g.angle = new_angle;
    return g;
}

ComplexMatrix gate_matrix(const Gate& g) {
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    switch (g.kind) {
        case GateKind::Rx: {
            ComplexMatrix m(2, 2);
            m(0, 0) = c;
            m(0, 1) = cdouble{0.0, -s};
            m(1, 0) = cdouble{0.0, -s};
            m(1, 1) = c;
            return m;
        }
        case GateKind::Ry: {
            ComplexMatrix m(2, 2);
            m(0, 0) = c;
            m(0, 1) = -s;
            m(1, 0) = s;
            m(1, 1) = c;
            return m;
        }
        case GateKind::Rz: {
            ComplexMatrix m(2, 2);
            m(0, 0) = cdouble{c, -s};
            m(1, 1) = cdouble{c, s};
            return m;
        }
        case GateKind::Cnot: {
            ComplexMatrix m = ComplexMatrix::identity(4);
            m(2, 2) = 0.0;
            m(3, 3) = 0.0;
            m(2, 3) = 1.0;
            m(3, 2) = 1.0;
            return m;
        }
        case GateKind::FullUnitary:
            return g.matrix;
    }
    throw std::logic_error("gate_matrix: unknown gate kind");
}

namespace {

void apply_single_qubit(ComplexVector& amps, size_t num_qubits, size_t target,
                        cdouble u00, cdouble u01, cdouble u10, cdouble u11) {
    if (target >= num_qubits) {
        throw std::out_of_range("apply_gate: target qubit out of range");
    }
    const size_t mask = size_t{1} << (num_qubits - 1 - target);
    const size_t dim = amps.size();
    for (size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const cdouble a0 = amps[i];
        const cdouble a1 = amps[i | mask];
        amps[i] = u00 * a0 + u01 * a1;
        amps[i | mask] = u10 * a0 + u11 * a1;
    }
}

} // namespace

void apply_gate_inplace(StateVector& state, const Gate& g) {
    ComplexVector& amps = state.amplitudes();
    const size_t n = state.num_qubits();
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    switch (g.kind) {
        case GateKind::Rx:
            apply_single_qubit(amps, n, g.target, c, {0.0, -s}, {0.0, -s}, c);
            return;
        case GateKind::Ry:
            apply_single_qubit(amps, n, g.target, c, -s, s, c);
            return;
        case GateKind::Rz:
            apply_single_qubit(amps, n, g.target, {c, -s}, 0.0, 0.0, {c, s});
            return;
        case GateKind::Cnot: {
            if (g.control >= n || g.target >= n) {
                throw std::out_of_range("apply_gate: CNOT qubit out of range");
            }
            const size_t cmask = size_t{1} << (n - 1 - g.control);
            const size_t tmask = size_t{1} << (n - 1 - g.target);
            for (size_t i = 0; i < amps.size(); ++i) {
                if ((i & cmask) && !(i & tmask)) {
                    std::swap(amps[i], amps[i | tmask]);
                }
            }
            return;
        }
        case GateKind::FullUnitary: {
            if (g.matrix.rows() != amps.size()) {
                throw std::invalid_argument("apply_gate: FullUnitary dimension mismatch");
            }
            amps = matvec(g.matrix, amps);
            return;
        }
    }
    throw std::logic_error("apply_gate: unknown gate kind");
}

StateVector apply_gate(const StateVector& state, const Gate& g) {
    StateVector out = state;
    apply_gate_inplace(out, g);
    return out;
}

void apply_circuit_inplace(StateVector& state, const Circuit& c) {
    if (c.num_qubits != state.num_qubits()) {
        throw std::invalid_argument("apply_circuit: qubit count mismatch");
    }
    for (const Gate& g : c.gates) {
        apply_gate_inplace(state, g);
    }
}

StateVector apply_circuit(const StateVector& state, const Circuit& c) {
    StateVector out = state;
    apply_circuit_inplace(out, c);
    return out;
}

double expectation_z(const StateVector& state, size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw std::out_of_range("expectation_z: qubit out of range");
    }
    const size_t mask = size_t{1} << (state.num_qubits() - 1 - qubit);
    double acc = 0.0;
    const ComplexVector& amps = state.amplitudes();
    for (size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

ComplexMatrix haar_unitary(size_t dim, RngStream& rng) {
    if (dim == 0) {
        throw std::invalid_argument("haar_unitary: dim must be >= 1");
    }
    ComplexMatrix g(dim, dim);
    for (auto& e : g.entries()) e = rng.complex_normal();
    QrResult qr = qr_decompose(g);
    // Column phase correction makes the draw exactly Haar.
    for (size_t j = 0; j < dim; ++j) {
        const cdouble rjj = qr.r(j, j);
        const cdouble ph = rjj / std::abs(rjj);
        for (size_t i = 0; i < dim; ++i) qr.q(i, j) *= ph;
    }
    return std::move(qr.q);
}

} // namespace qjet
