#ifndef QJET_COMPLEX_MATRIX_HPP
#define QJET_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace qjet {

using cdouble = std::complex<double>;
using ComplexVector = std::vector<cdouble>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    ComplexMatrix(size_t rows, size_t cols, ComplexVector entries);

    static ComplexMatrix identity(size_t n);
    static ComplexMatrix diagonal(const ComplexVector& d);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    cdouble& operator()(size_t r, size_t c) { return entries_[r * cols_ + c]; }
    const cdouble& operator()(size_t r, size_t c) const { return entries_[r * cols_ + c]; }

    ComplexVector& entries() { return entries_; }
    const ComplexVector& entries() const { return entries_; }

    bool is_square() const { return rows_ == cols_; }

    /// Largest entry magnitude (max norm).
    double max_abs() const;

    /// Throws std::invalid_argument if any entry is NaN or Inf.
    void require_finite(const char* what) const;

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    ComplexVector entries_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cdouble factor);

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);

/// max |a - b| over all entries; dimensions must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |(a'a)_ij - delta_ij|.
double unitarity_error(const ComplexMatrix& a);

/// max |a_ij - conj(a_ji)|.
double hermiticity_error(const ComplexMatrix& a);

} // namespace qjet

#endif
