#include "qjet/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qjet {

ComplexMatrix::ComplexMatrix(size_t rows, size_t cols, ComplexVector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw std::invalid_argument("ComplexMatrix: entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(size_t n) {
    ComplexMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const ComplexVector& d) {
    ComplexMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

void ComplexMatrix::require_finite(const char* what) const {
    for (const auto& e : entries_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            throw std::invalid_argument(std::string(what) + ": non-finite matrix entry");
        }
    }
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions do not match");
    }
    ComplexMatrix out(a.rows(), b.cols());
    // k-middle loop order keeps the inner loop contiguous in both b and out.
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            const cdouble* brow = &b(k, 0);
            cdouble* orow = &out(i, 0);
            for (size_t j = 0; j < b.cols(); ++j) {
                orow[j] += aik * brow[j];
            }
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) {
            const cdouble aij = a(i, j);
            for (size_t k = 0; k < b.rows(); ++k) {
                for (size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("add: dimension mismatch");
    }
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.entries().size(); ++i) {
        out.entries()[i] = a.entries()[i] + b.entries()[i];
    }
    return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("subtract: dimension mismatch");
    }
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.entries().size(); ++i) {
        out.entries()[i] = a.entries()[i] - b.entries()[i];
    }
    return out;
}

ComplexMatrix scale(const ComplexMatrix& a, cdouble factor) {
    ComplexMatrix out(a.rows(), a.cols());
    for (size_t i = 0; i < a.entries().size(); ++i) {
        out.entries()[i] = a.entries()[i] * factor;
    }
    return out;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    ComplexVector out(a.rows());
    for (size_t i = 0; i < a.rows(); ++i) {
        const cdouble* row = &a(i, 0);
        cdouble acc = 0.0;
        for (size_t j = 0; j < x.size(); ++j) {
            acc += row[j] * x[j];
        }
        out[i] = acc;
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double m = 0.0;
    for (size_t i = 0; i < a.entries().size(); ++i) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

double unitarity_error(const ComplexMatrix& a) {
    return max_abs_diff(matmul(dagger(a), a), ComplexMatrix::identity(a.cols()));
}

double hermiticity_error(const ComplexMatrix& a) {
    if (!a.is_square()) return HUGE_VAL;
    double m = 0.0;
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = i; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

} // namespace qjet
