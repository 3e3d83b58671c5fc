#include "qjet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qjet {

namespace {

cdouble phase_of(cdouble z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cdouble{1.0, 0.0};
}

// Reduces a Hermitian matrix to real symmetric tridiagonal form with
// Householder reflectors, accumulating the unitary Q so that
// Q' * m * Q = tridiag(d, e). Off-diagonals are phase-rotated to be real
// non-negative; e[i] couples d[i] and d[i+1], e[n-1] is unused.
void tridiagonalize(const ComplexMatrix& m, ComplexMatrix& q,
                    std::vector<double>& d, std::vector<double>& e) {
    const size_t n = m.rows();
    ComplexMatrix a = m;
    q = ComplexMatrix::identity(n);
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    ComplexVector v(n), p(n), w(n);
    for (size_t k = 0; k + 2 < n; ++k) {
        double sigma2 = 0.0;
        for (size_t i = k + 1; i < n; ++i) sigma2 += std::norm(a(i, k));
        const double sigma = std::sqrt(sigma2);
        double below2 = 0.0;
        for (size_t i = k + 2; i < n; ++i) below2 += std::norm(a(i, k));
        if (std::sqrt(below2) == 0.0) continue;  // column already tridiagonal

        const cdouble alpha = -phase_of(a(k + 1, k)) * sigma;
        double vnorm2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            v[i] = (i > k) ? a(i, k) : cdouble{};
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        const double tau = 2.0 / vnorm2;

        // Rank-2 Hermitian update: a <- a - v w' - w v' with
        // p = tau a v, w = p - (tau/2) (v' p) v.
        for (size_t i = 0; i < n; ++i) {
            cdouble acc = 0.0;
            for (size_t j = k; j < n; ++j) acc += a(i, j) * v[j];
            p[i] = tau * acc;
        }
        cdouble vp = 0.0;
        for (size_t i = k; i < n; ++i) vp += std::conj(v[i]) * p[i];
        const cdouble half = vp * (tau / 2.0);
        for (size_t i = 0; i < n; ++i) w[i] = p[i] - half * v[i];
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = k; j < n; ++j) {
                a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
            }
        }
        // Mirror the updated lower strip into the columns we skipped.
        for (size_t i = 0; i < k; ++i) {
            for (size_t j = k; j < n; ++j) a(j, i) = std::conj(a(i, j));
        }

        // q <- q (I - tau v v')
        for (size_t i = 0; i < n; ++i) {
            cdouble acc = 0.0;
            for (size_t j = k + 1; j < n; ++j) acc += q(i, j) * v[j];
            acc *= tau;
            for (size_t j = k + 1; j < n; ++j) q(i, j) -= acc * std::conj(v[j]);
        }
    }

    // Absorb the residual off-diagonal phases into q's columns.
    cdouble col_phase{1.0, 0.0};
    for (size_t i = 0; i < n; ++i) {
        d[i] = a(i, i).real();
        if (i + 1 < n) {
            const cdouble t = a(i + 1, i);
            e[i] = std::abs(t);
            const cdouble next_phase = (e[i] > 0.0) ? phase_of(t) * col_phase : col_phase;
            if (next_phase != cdouble{1.0, 0.0}) {
                for (size_t r = 0; r < n; ++r) q(r, i + 1) *= next_phase;
            }
            col_phase = next_phase;
        }
    }
}

// Implicit-shift QL on a real symmetric tridiagonal matrix, rotating the
// complex columns of q alongside. Classic tql2 with the usual 30-sweep cap
// per eigenvalue.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& q) {
    const size_t n = d.size();
    if (n == 0) return;
    e[n - 1] = 0.0;

    for (size_t l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            size_t m = l;
            while (m + 1 < n) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
                ++m;
            }
            if (m == l) break;
            if (++iter > 30) {
                throw std::runtime_error("herm_eig: QL iteration did not converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow_restart = false;
            for (size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    // Rotation collapsed; deflate and restart the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (size_t row = 0; row < n; ++row) {
                    const cdouble qa = q(row, i);
                    const cdouble qb = q(row, i + 1);
                    q(row, i + 1) = s * qa + c * qb;
                    q(row, i) = c * qa - s * qb;
                }
            }
            if (underflow_restart) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

} // namespace

EigResult herm_eig(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw std::invalid_argument("herm_eig: matrix must be square");
    }
    m.require_finite("herm_eig");
    const double scale = std::max(1.0, m.max_abs());
    if (hermiticity_error(m) > 1e-10 * scale) {
        throw std::invalid_argument("herm_eig: matrix is not Hermitian");
    }

    const size_t n = m.rows();
    EigResult out;
    if (n == 0) {
        out.vectors = ComplexMatrix(0, 0);
        return out;
    }

    ComplexMatrix q;
    std::vector<double> d, e;
    tridiagonalize(m, q, d, e);
    tridiag_ql(d, e, q);

    // Sort ascending, permuting eigenvector columns to match.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return d[a] < d[b]; });

    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
    }
    return out;
}

QrResult qr_decompose(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw std::invalid_argument("qr_decompose: matrix must be square");
    }
    m.require_finite("qr_decompose");
    const size_t n = m.rows();
    ComplexMatrix r = m;
    ComplexMatrix q = ComplexMatrix::identity(n);

    ComplexVector v(n);
    for (size_t k = 0; k + 1 < n; ++k) {
        double below2 = 0.0;
        for (size_t i = k + 1; i < n; ++i) below2 += std::norm(r(i, k));
        if (below2 == 0.0) continue;  // nothing to annihilate, keeps r_kk's sign
        const double sigma = std::sqrt(below2 + std::norm(r(k, k)));

        const cdouble alpha = -phase_of(r(k, k)) * sigma;
        double vnorm2 = 0.0;
        for (size_t i = k; i < n; ++i) {
            v[i] = r(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        const double tau = 2.0 / vnorm2;

        for (size_t j = k; j < n; ++j) {
            cdouble acc = 0.0;
            for (size_t i = k; i < n; ++i) acc += std::conj(v[i]) * r(i, j);
            acc *= tau;
            for (size_t i = k; i < n; ++i) r(i, j) -= acc * v[i];
        }
        for (size_t i = 0; i < n; ++i) {
            cdouble acc = 0.0;
            for (size_t j = k; j < n; ++j) acc += q(i, j) * v[j];
            acc *= tau;
            for (size_t j = k; j < n; ++j) q(i, j) -= acc * std::conj(v[j]);
        }
    }

    for (size_t i = 0; i < n; ++i) {
        if (std::abs(r(i, i)) < 1e-12) {
            throw std::runtime_error("qr_decompose: matrix is rank-deficient");
        }
        for (size_t j = 0; j < i; ++j) r(i, j) = 0.0;
    }
    return {std::move(q), std::move(r)};
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& m) {
    EigResult eig = herm_eig(m);
    const size_t n = m.rows();
    for (double& lambda : eig.values) {
        if (lambda < -1e-6) {
            throw std::invalid_argument("sqrtm_psd: matrix is not positive semidefinite");
        }
        lambda = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    // V diag(sqrt(lambda)) V', symmetrized to clean up rounding noise.
    ComplexMatrix out(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            cdouble acc = 0.0;
            for (size_t k = 0; k < n; ++k) {
                acc += eig.vectors(i, k) * eig.values[k] * std::conj(eig.vectors(j, k));
            }
            out(i, j) = acc;
            out(j, i) = std::conj(acc);
        }
        out(i, i) = out(i, i).real();
    }
    return out;
}

UnitaryEig unitary_eig(const ComplexMatrix& u) {
    if (!u.is_square()) {
        throw std::invalid_argument("unitary_eig: matrix must be square");
    }
    if (unitarity_error(u) > 1e-10) {
        throw std::invalid_argument("unitary_eig: matrix is not unitary");
    }
    const size_t n = u.rows();
    const ComplexMatrix ud = dagger(u);

    // Commuting Hermitian pair: u = X + iY with X = cos and Y = sin of the
    // eigenphases in u's eigenbasis.
    ComplexMatrix x(n, n), y(n, n);
    for (size_t i = 0; i < n * n; ++i) {
        x.entries()[i] = (u.entries()[i] + ud.entries()[i]) * 0.5;
        y.entries()[i] = (u.entries()[i] - ud.entries()[i]) * cdouble{0.0, -0.5};
    }

    EigResult ex = herm_eig(x);
    ComplexMatrix v = std::move(ex.vectors);

    // X eigenvalues cos(phi) collapse +/-phi pairs, so rediagonalize Y inside
    // each (near-)degenerate cluster to split them.
    size_t start = 0;
    while (start < n) {
        size_t stop = start + 1;
        while (stop < n && ex.values[stop] - ex.values[stop - 1] < 1e-7) ++stop;
        const size_t width = stop - start;
        if (width > 1) {
            ComplexMatrix block(n, width);
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < width; ++j) block(i, j) = v(i, start + j);
            }
            ComplexMatrix sub = matmul(dagger(block), matmul(y, block));
            // Symmetrize before the Hermitian solve; content is Hermitian up
            // to rounding because [X, Y] = 0.
            for (size_t i = 0; i < width; ++i) {
                for (size_t j = i + 1; j < width; ++j) {
                    const cdouble avg = (sub(i, j) + std::conj(sub(j, i))) * 0.5;
                    sub(i, j) = avg;
                    sub(j, i) = std::conj(avg);
                }
                sub(i, i) = sub(i, i).real();
            }
            EigResult ey = herm_eig(sub);
            ComplexMatrix rotated = matmul(block, ey.vectors);
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < width; ++j) v(i, start + j) = rotated(i, j);
            }
        }
        start = stop;
    }

    UnitaryEig out;
    out.phases.resize(n);
    for (size_t k = 0; k < n; ++k) {
        cdouble xe = 0.0, ye = 0.0;
        for (size_t i = 0; i < n; ++i) {
            cdouble xv = 0.0, yv = 0.0;
            for (size_t j = 0; j < n; ++j) {
                xv += x(i, j) * v(j, k);
                yv += y(i, j) * v(j, k);
            }
            xe += std::conj(v(i, k)) * xv;
            ye += std::conj(v(i, k)) * yv;
        }
        out.phases[k] = std::atan2(ye.real(), xe.real());
    }
    out.vectors = std::move(v);
    return out;
}

ComplexMatrix unitary_power(const ComplexMatrix& u, double s) {
    const UnitaryEig eig = unitary_eig(u);
    const size_t n = u.rows();
    ComplexMatrix out(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            cdouble acc = 0.0;
            for (size_t k = 0; k < n; ++k) {
                const cdouble lam = std::polar(1.0, s * eig.phases[k]);
                acc += eig.vectors(i, k) * lam * std::conj(eig.vectors(j, k));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

} // namespace qjet
