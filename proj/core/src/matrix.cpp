#include "zeno_otto/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zeno_otto {

namespace {

constexpr double kHermTol = 1e-10;

void require_same_dim(const Mat& a, const Mat& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("matrix dimension mismatch: " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
    }
}

void require_dim4(const Mat& m, const char* op) {
    if (m.dim() != 4) {
        throw std::invalid_argument(std::string(op) + " requires a dim-4 operator, got dim " +
                                    std::to_string(m.dim()));
    }
}

}  // namespace

Mat Mat::identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(int dim, std::initializer_list<cx> entries) {
    if (static_cast<int>(entries.size()) != dim * dim) {
        throw std::invalid_argument("from_rows: wrong entry count");
    }
    Mat m(dim);
    int k = 0;
    for (const cx& e : entries) {
        m(k / dim, k % dim) = e;
        ++k;
    }
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    require_same_dim(*this, o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    require_same_dim(*this, o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Mat& Mat::operator*=(cx s) {
    for (cx& e : a_) e *= s;
    return *this;
}

Mat Mat::dagger() const {
    Mat m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

cx Mat::trace() const {
    cx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

bool Mat::is_hermitian(double tol) const {
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool Mat::all_finite() const {
    for (const cx& e : a_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (const cx& e : a_) m = std::max(m, std::abs(e));
    return m;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (const cx& e : a_) s += std::norm(e);
    return std::sqrt(s);
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }

Mat operator*(const Mat& a, const Mat& b) {
    require_same_dim(a, b);
    const int n = a.dim();
    Mat c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cx aik = a(i, k);
            if (aik == cx{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Mat operator*(cx s, Mat a) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= cx{s, 0.0}; }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

double expectation(const Mat& h, const Mat& rho) { return (h * rho).trace().real(); }

double max_abs_diff(const Mat& a, const Mat& b) {
    require_same_dim(a, b);
    double m = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

Mat pauli_x() { return Mat::from_rows(2, {0.0, 1.0, 1.0, 0.0}); }
Mat pauli_y() { return Mat::from_rows(2, {0.0, cx{0.0, -1.0}, cx{0.0, 1.0}, 0.0}); }
Mat pauli_z() { return Mat::from_rows(2, {1.0, 0.0, 0.0, -1.0}); }

Mat outer(const cx (&v)[2], const cx (&w)[2]) {
    Mat m(2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = v[r] * std::conj(w[c]);
    return m;
}

Mat tensor_product(const Mat& a, const Mat& b) {
    const int na = a.dim(), nb = b.dim();
    Mat c(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return c;
}

Mat partial_trace(const Mat& m, Subsystem keep) {
    require_dim4(m, "partial_trace");
    Mat out(2);
    if (keep == Subsystem::First) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
    } else {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                for (int i = 0; i < 2; ++i) out(k, l) += m(2 * i + k, 2 * i + l);
    }
    return out;
}

Mat partial_transpose(const Mat& m, Subsystem side) {
    require_dim4(m, "partial_transpose");
    Mat out(4);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    if (side == Subsystem::First)
                        out(2 * i + k, 2 * j + l) = m(2 * j + k, 2 * i + l);
                    else
                        out(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
                }
    return out;
}

namespace {

// Make the first non-negligible entry of each eigenvector column real positive,
// so eigenvector output (and the degeneracy tie-break) is reproducible.
void fix_column_phases(Mat& v) {
    const int n = v.dim();
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            const double mag = std::abs(v(r, c));
            if (mag > 1e-8) {
                const cx phase = std::conj(v(r, c)) / mag;
                for (int k = 0; k < n; ++k) v(k, c) *= phase;
                break;
            }
        }
    }
}

long long rounded(double x) { return std::llround(x * 1e9); }

// Ascending eigenvalue order; near-degenerate values ordered by the
// lexicographic comparison of rounded eigenvector entries.
void sort_eigensystem(EigenSystem& es) {
    const int n = es.vectors.dim();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const double degeneracy_tol = 1e-12 * std::max(1.0, std::abs(es.values.back() - es.values.front()));
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (std::abs(es.values[a] - es.values[b]) > degeneracy_tol) return es.values[a] < es.values[b];
        for (int r = 0; r < n; ++r) {
            const cx va = es.vectors(r, a), vb = es.vectors(r, b);
            if (rounded(va.real()) != rounded(vb.real())) return rounded(va.real()) < rounded(vb.real());
            if (rounded(va.imag()) != rounded(vb.imag())) return rounded(va.imag()) < rounded(vb.imag());
        }
        return false;
    });
    EigenSystem sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n);
    for (int c = 0; c < n; ++c) {
        sorted.values[c] = es.values[idx[c]];
        for (int r = 0; r < n; ++r) sorted.vectors(r, c) = es.vectors(r, idx[c]);
    }
    es = std::move(sorted);
}

EigenSystem eigensystem_2x2(const Mat& m) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const cx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double half_sum = 0.5 * (a + c);
    const double r = std::hypot(0.5 * (a - c), std::abs(b));

    EigenSystem es;
    es.values = {half_sum - r, half_sum + r};
    es.vectors = Mat(2);
    if (std::abs(b) < 1e-300) {
        // Already diagonal.
        if (a <= c) {
            es.values = {a, c};
            es.vectors(0, 0) = 1.0;
            es.vectors(1, 1) = 1.0;
        } else {
            es.values = {c, a};
            es.vectors(1, 0) = 1.0;
            es.vectors(0, 1) = 1.0;
        }
    } else {
        for (int k = 0; k < 2; ++k) {
            const double lam = es.values[k];
            // Two algebraically equivalent null vectors; keep the better conditioned one.
            cx v0 = b, v1 = cx{lam - a, 0.0};
            const cx w0 = cx{lam - c, 0.0}, w1 = std::conj(b);
            if (std::norm(w0) + std::norm(w1) > std::norm(v0) + std::norm(v1)) {
                v0 = w0;
                v1 = w1;
            }
            const double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
            es.vectors(0, k) = v0 / nrm;
            es.vectors(1, k) = v1 / nrm;
        }
    }
    fix_column_phases(es.vectors);
    sort_eigensystem(es);
    return es;
}

double offdiag_mass(const Mat& a) {
    double s = 0.0;
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q)
            if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
}

EigenSystem eigensystem_jacobi(const Mat& m) {
    const int n = m.dim();
    // Exact Hermitian part; the caller has already checked the tolerance.
    Mat a(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    Mat v = Mat::identity(n);

    const double threshold = 1e-13 * std::max(1.0, a.frobenius());
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && offdiag_mass(a) > threshold; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= threshold * 1e-3) continue;
                const cx phase = apq / r;  // e^{i phi}
                const double tau = (a(p, p).real() - a(q, q).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const double sth = t * cth;
                // Unitary J: J(p,p)=c, J(p,q)=-s e^{i phi}, J(q,p)=s e^{-i phi}, J(q,q)=c.
                for (int k = 0; k < n; ++k) {  // A <- A J, V <- V J
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = cth * akp + sth * std::conj(phase) * akq;
                    a(k, q) = -sth * phase * akp + cth * akq;
                    const cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cth * vkp + sth * std::conj(phase) * vkq;
                    v(k, q) = -sth * phase * vkp + cth * vkq;
                }
                for (int k = 0; k < n; ++k) {  // A <- J^dag A
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cth * apk + sth * phase * aqk;
                    a(q, k) = -sth * std::conj(phase) * apk + cth * aqk;
                }
            }
        }
    }

    EigenSystem es;
    es.values.resize(n);
    for (int i = 0; i < n; ++i) es.values[i] = a(i, i).real();
    es.vectors = std::move(v);
    fix_column_phases(es.vectors);
    sort_eigensystem(es);
    return es;
}

}  // namespace

EigenSystem hermitian_eigensystem(const Mat& m) {
    if (m.dim() < 1) throw std::invalid_argument("hermitian_eigensystem: empty matrix");
    if (!m.is_hermitian(kHermTol)) {
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian within 1e-10");
    }
    if (m.dim() == 1) {
        EigenSystem es;
        es.values = {m(0, 0).real()};
        es.vectors = Mat::identity(1);
        return es;
    }
    if (m.dim() == 2) return eigensystem_2x2(m);
    return eigensystem_jacobi(m);
}

Mat hermitian_exponential(const Mat& h, double scale) {
    const EigenSystem es = hermitian_eigensystem(h);
    const int n = h.dim();
    Mat u(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cx s = 0.0;
            for (int k = 0; k < n; ++k) {
                const cx ph = std::exp(cx{0.0, -scale * es.values[k]});
                s += es.vectors(r, k) * ph * std::conj(es.vectors(c, k));
            }
            u(r, c) = s;
        }
    return u;
}

MatrixNorms norms(const Mat& m) {
    MatrixNorms out{0.0, 0.0, m.frobenius()};
    std::vector<double> sing;
    if (m.is_hermitian(kHermTol)) {
        for (double lam : hermitian_eigensystem(m).values) sing.push_back(std::abs(lam));
    } else {
        const EigenSystem es = hermitian_eigensystem(m.dagger() * m);
        for (double lam : es.values) sing.push_back(std::sqrt(std::max(lam, 0.0)));
    }
    for (double s : sing) {
        out.trace_norm += s;
        out.operator_norm = std::max(out.operator_norm, s);
    }
    return out;
}

}  // namespace zeno_otto
