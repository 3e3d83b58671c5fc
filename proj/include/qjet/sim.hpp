#ifndef QJET_SIM_HPP
#define QJET_SIM_HPP

#include <cstddef>
#include <vector>

#include "qjet/complex_matrix.hpp"
#include "qjet/rng.hpp"

namespace qjet {

/// Normalized amplitude vector of an n-qubit register.
///
/// Convention: qubit 0 is the most significant bit of the basis index, so
/// |q0 q1 ... q_{n-1}> lives at index (q0 << (n-1)) | ... | q_{n-1}.
class StateVector {
  public:
    explicit StateVector(size_t num_qubits);  // starts in |0...0>
    StateVector(size_t num_qubits, ComplexVector amplitudes);

    size_t num_qubits() const { return num_qubits_; }
    size_t dim() const { return amplitudes_.size(); }

    ComplexVector& amplitudes() { return amplitudes_; }
    const ComplexVector& amplitudes() const { return amplitudes_; }

    double norm_squared() const;

    /// Renormalizes in place; throws if the norm is zero.
    void normalize();

  private:
    size_t num_qubits_;
    ComplexVector amplitudes_;
};

enum class GateKind { Rx, Ry, Rz, Cnot, FullUnitary };

/// One circuit element. Rotation gates carry (angle, target); CNOT carries
/// (control, target); FullUnitary carries a dense matrix over the whole
/// register. Rotation convention: Rx(t) = exp(-i t X / 2), likewise Ry/Rz.
struct Gate {
    GateKind kind;
    double angle = 0.0;
    size_t target = 0;
    size_t control = 0;
    ComplexMatrix matrix;  // FullUnitary only

    static Gate rx(double angle, size_t target);
    static Gate ry(double angle, size_t target);
    static Gate rz(double angle, size_t target);
    static Gate cnot(size_t control, size_t target);
    static Gate full_unitary(ComplexMatrix matrix);

    bool is_rotation() const {
        return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz;
    }

    /// Same gate with a different rotation angle. Throws for non-rotations.
    Gate with_angle(double new_angle) const;
};

struct Circuit {
    size_t num_qubits = 0;
    std::vector<Gate> gates;
};

/// Dense matrix of a gate: 2x2 for rotations, 4x4 for CNOT in
/// (control, target) tensor order, or the stored matrix for FullUnitary.
ComplexMatrix gate_matrix(const Gate& g);

/// In-place gate application by stride-indexed amplitude updates
/// (FullUnitary falls back to a dense matrix-vector product).
void apply_gate_inplace(StateVector& state, const Gate& g);
StateVector apply_gate(const StateVector& state, const Gate& g);

void apply_circuit_inplace(StateVector& state, const Circuit& c);
StateVector apply_circuit(const StateVector& state, const Circuit& c);

/// <Z_qubit> = P(qubit = 0) - P(qubit = 1), in [-1, 1].
double expectation_z(const StateVector& state, size_t qubit);

/// Haar-distributed unitary: QR of an i.i.d. complex Gaussian matrix with
/// the R-diagonal phase correction applied to Q's columns.
ComplexMatrix haar_unitary(size_t dim, RngStream& rng);

} // namespace qjet

#endif
