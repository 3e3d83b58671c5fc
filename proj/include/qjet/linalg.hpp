#ifndef QJET_LINALG_HPP
#define QJET_LINALG_HPP

#include <vector>

#include "qjet/complex_matrix.hpp"

namespace qjet {

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // eigenvector k in column k
};

/// Eigendecomposition of a Hermitian matrix: Householder tridiagonalization
/// followed by implicit-shift QL on the real tridiagonal form. Eigenvalues
/// ascend; eigenvector columns are orthonormal.
///
/// Throws std::invalid_argument if m is not square or not Hermitian within
/// 1e-10 * max(1, |m|_max), std::runtime_error if the QL iteration fails to
/// converge.
EigResult herm_eig(const ComplexMatrix& m);

struct QrResult {
    ComplexMatrix q;
    ComplexMatrix r;
};

/// Householder QR of a square full-rank matrix: m = q * r with q unitary and
/// r upper triangular. Throws std::runtime_error if any |r_ii| < 1e-12.
QrResult qr_decompose(const ComplexMatrix& m);

/// Principal square root of a Hermitian PSD matrix via eigendecomposition.
/// Eigenvalues in [-1e-6, 0) are clamped to zero; anything below -1e-6 is
/// rejected as non-PSD.
ComplexMatrix sqrtm_psd(const ComplexMatrix& m);

struct UnitaryEig {
    std::vector<double> phases;  // principal branch, in (-pi, pi]
    ComplexMatrix vectors;       // unit eigenvector per column
};

/// Spectral decomposition of a unitary: u = V diag(exp(i*phase_k)) V'.
/// Computed through the commuting Hermitian pair (u + u')/2 and (u - u')/2i,
/// so only herm_eig is needed underneath. Throws std::invalid_argument if u
/// is not unitary within 1e-10.
UnitaryEig unitary_eig(const ComplexMatrix& u);

/// u^s on the principal branch: V diag(exp(i*s*phase_k)) V'.
ComplexMatrix unitary_power(const ComplexMatrix& u, double s);

} // namespace qjet

#endif
