#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qjet/linalg.hpp"
#include "qjet/rng.hpp"
#include "qjet/sim.hpp"

using namespace qjet;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

} // namespace

TEST_CASE("matmul basics") {
    RngStream rng(11);
    const ComplexMatrix m = oracle::random_complex(2, 2, rng);
    CHECK(max_abs_diff(matmul(ComplexMatrix::identity(2), m), m) == 0.0);
    CHECK(max_abs_diff(matmul(pauli_x(), pauli_x()), ComplexMatrix::identity(2)) == 0.0);

    const ComplexMatrix a = oracle::random_complex(3, 3, rng);
    const ComplexMatrix b = oracle::random_complex(3, 3, rng);
    CHECK(max_abs_diff(matmul(a, b), oracle::naive_matmul(a, b)) < 1e-12);

    CHECK_THROWS_AS(matmul(oracle::random_complex(2, 3, rng), oracle::random_complex(2, 3, rng)),
                    std::invalid_argument);
}

TEST_CASE("matmul associativity on random triples") {
    RngStream rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = oracle::random_complex(4, 5, rng);
        const ComplexMatrix b = oracle::random_complex(5, 3, rng);
        const ComplexMatrix c = oracle::random_complex(3, 6, rng);
        const ComplexMatrix left = matmul(matmul(a, b), c);
        const ComplexMatrix right = matmul(a, matmul(b, c));
        const double scale = std::max(1.0, left.max_abs());
        CHECK(max_abs_diff(left, right) < 1e-10 * scale);
    }
}

TEST_CASE("kron basics and index-formula oracle") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix zi = kron(pauli_z(), i2);
    ComplexMatrix expected(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    expected(2, 2) = -1.0;
    expected(3, 3) = -1.0;
    CHECK(max_abs_diff(zi, expected) == 0.0);

    RngStream rng(13);
    const ComplexMatrix a = oracle::random_complex(2, 2, rng);
    const ComplexMatrix b = oracle::random_complex(3, 3, rng);
    CHECK(max_abs_diff(kron(a, b), oracle::kron_by_index(a, b)) < 1e-14);
}

TEST_CASE("kron mixed-product property") {
    RngStream rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = oracle::random_complex(2, 3, rng);
        const ComplexMatrix b = oracle::random_complex(3, 2, rng);
        const ComplexMatrix c = oracle::random_complex(3, 2, rng);
        const ComplexMatrix d = oracle::random_complex(2, 4, rng);
        const ComplexMatrix lhs = matmul(kron(a, b), kron(c, d));
        const ComplexMatrix rhs = kron(matmul(a, c), matmul(b, d));
        CHECK(max_abs_diff(lhs, rhs) < 1e-10 * std::max(1.0, rhs.max_abs()));
    }
}

TEST_CASE("dagger") {
    RngStream rng(15);
    CHECK(max_abs_diff(dagger(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)) == 0.0);
    const ComplexMatrix m = oracle::random_complex(4, 2, rng);
    CHECK(max_abs_diff(dagger(dagger(m)), m) == 0.0);

    const ComplexMatrix u = haar_unitary(8, rng);
    CHECK(max_abs_diff(matmul(dagger(u), u), ComplexMatrix::identity(8)) < 1e-12);
}

TEST_CASE("herm_eig diagonal and Pauli-X") {
    ComplexMatrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    const EigResult e = herm_eig(d);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.values[2] == doctest::Approx(3.0).epsilon(1e-12));
    for (size_t k = 0; k < 3; ++k) {
        for (size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(e.vectors(i, k)) == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
        }
    }

    const EigResult x = herm_eig(pauli_x());
    CHECK(x.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(x.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
    RngStream rng(16);
    for (const size_t n : {2, 5, 8, 16}) {
        const ComplexMatrix m = oracle::random_hermitian(n, rng);
        const EigResult e = herm_eig(m);

        // Orthonormal eigenvector columns.
        CHECK(unitarity_error(e.vectors) < 1e-10);

        // V diag(lambda) V' == M.
        ComplexMatrix rec(n, n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                cdouble acc = 0.0;
                for (size_t k = 0; k < n; ++k) {
                    acc += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
                }
                rec(i, j) = acc;
            }
        }
        CHECK(max_abs_diff(rec, m) < 1e-9 * std::max(1.0, m.max_abs()));

        // Eigenvalues ascend and sum to the trace.
        double sum = 0.0, trace = 0.0;
        for (size_t k = 0; k < n; ++k) {
            sum += e.values[k];
            trace += m(k, k).real();
            if (k > 0) CHECK(e.values[k] >= e.values[k - 1]);
        }
        CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    RngStream rng(17);
    CHECK_THROWS_AS(herm_eig(oracle::random_complex(4, 4, rng)), std::invalid_argument);
    CHECK_THROWS_AS(herm_eig(oracle::random_complex(3, 4, rng)), std::invalid_argument);
}

TEST_CASE("qr_decompose basics") {
    const QrResult qi = qr_decompose(ComplexMatrix::identity(4));
    CHECK(max_abs_diff(qi.q, ComplexMatrix::identity(4)) == 0.0);
    CHECK(max_abs_diff(qi.r, ComplexMatrix::identity(4)) == 0.0);

    ComplexMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const QrResult qd = qr_decompose(d);
    CHECK(max_abs_diff(qd.q, ComplexMatrix::identity(2)) == 0.0);
    CHECK(max_abs_diff(qd.r, d) == 0.0);
}

TEST_CASE("qr_decompose reconstructs random matrices") {
    RngStream rng(18);
    const ComplexMatrix m = oracle::random_complex(16, 16, rng);
    const QrResult qr = qr_decompose(m);
    CHECK(unitarity_error(qr.q) < 1e-10);
    CHECK(max_abs_diff(matmul(qr.q, qr.r), m) < 1e-9 * std::max(1.0, m.max_abs()));
    for (size_t i = 0; i < 16; ++i) {
        for (size_t j = 0; j < i; ++j) {
            CHECK(std::abs(qr.r(i, j)) == 0.0);
        }
    }
}

TEST_CASE("qr_decompose rejects rank-deficient input") {
    RngStream rng(19);
    ComplexMatrix m = oracle::random_complex(4, 4, rng);
    for (size_t i = 0; i < 4; ++i) m(i, 2) = 0.0;  // dead column
    CHECK_THROWS_AS(qr_decompose(m), std::runtime_error);
}

TEST_CASE("sqrtm_psd basics") {
    CHECK(max_abs_diff(sqrtm_psd(ComplexMatrix::identity(5)), ComplexMatrix::identity(5)) <
          1e-12);
    ComplexMatrix d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const ComplexMatrix s = sqrtm_psd(d);
    CHECK(s(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s(1, 1).real() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sqrtm_psd squares back to the input") {
    RngStream rng(20);
    const ComplexMatrix b = oracle::random_complex(6, 6, rng);
    const ComplexMatrix a = matmul(b, dagger(b));
    const ComplexMatrix s = sqrtm_psd(a);
    CHECK(max_abs_diff(matmul(s, s), a) < 1e-8 * std::max(1.0, a.max_abs()));

    // Output is Hermitian PSD.
    CHECK(hermiticity_error(s) < 1e-9);
    const EigResult e = herm_eig(s);
    CHECK(e.values.front() > -1e-9);
}

TEST_CASE("sqrtm_psd rejects indefinite input") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    CHECK_THROWS_AS(sqrtm_psd(m), std::invalid_argument);
}

TEST_CASE("unitary_power matches direct application at the endpoints") {
    RngStream rng(21);
    const ComplexMatrix u = haar_unitary(16, rng);
    CHECK(max_abs_diff(unitary_power(u, 0.0), ComplexMatrix::identity(16)) < 1e-10);
    CHECK(max_abs_diff(unitary_power(u, 1.0), u) < 1e-9);

    const ComplexMatrix half = unitary_power(u, 0.5);
    CHECK(max_abs_diff(matmul(half, half), u) < 1e-9);
    CHECK(unitarity_error(half) < 1e-10);
}

TEST_CASE("unitary_power handles degenerate spectra") {
    // Identity has a single fully degenerate eigenphase cluster.
    CHECK(max_abs_diff(unitary_power(ComplexMatrix::identity(4), 0.7),
                       ComplexMatrix::identity(4)) < 1e-12);

    // Pauli-X has the +/-1 pair, which collides in (u + u')/2.
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix hx = unitary_power(x, 0.5);
    CHECK(max_abs_diff(matmul(hx, hx), x) < 1e-10);
}

TEST_CASE("unitary_eig rejects non-unitary input") {
    RngStream rng(22);
    CHECK_THROWS_AS(unitary_eig(oracle::random_complex(4, 4, rng)), std::invalid_argument);
}
