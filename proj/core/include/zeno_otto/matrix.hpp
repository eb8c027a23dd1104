#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeno_otto {

using cx = std::complex<double>;

// Raised when a numerical invariant (trace, Hermiticity, positivity,
// unitarity) is violated at a checkpoint. Mapped to exit code 3 by the CLI.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// Dense complex square matrix, row-major. Engine operations use dim 2 and 4;
// other small dims are allowed internally.
class Mat {
public:
    Mat() = default;
    explicit Mat(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static Mat identity(int dim);
    static Mat zero(int dim) { return Mat(dim); }
    // Row-major initializer, e.g. Mat::from_rows(2, {a,b,c,d}).
    static Mat from_rows(int dim, std::initializer_list<cx> entries);

    int dim() const { return dim_; }
    cx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const cx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(cx s);

    Mat dagger() const;
    cx trace() const;
    bool is_hermitian(double tol) const;
    bool all_finite() const;
    double max_abs() const;
    double frobenius() const;

private:
    int dim_ = 0;
    std::vector<cx> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(cx s, Mat a);
Mat operator*(double s, Mat a);

Mat commutator(const Mat& a, const Mat& b);
Mat anticommutator(const Mat& a, const Mat& b);

// Re Tr[h rho]; the imaginary part is discarded (vanishes for Hermitian h, rho).
double expectation(const Mat& h, const Mat& rho);

double max_abs_diff(const Mat& a, const Mat& b);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

// |v><w| for 2-vectors.
Mat outer(const cx (&v)[2], const cx (&w)[2]);

Mat tensor_product(const Mat& a, const Mat& b);

enum class Subsystem { First, Second };

// Trace out the complement of `keep` on a dim-4 bipartite (2x2) operator.
Mat partial_trace(const Mat& m, Subsystem keep);
// Transpose on one tensor factor of a dim-4 operator.
Mat partial_transpose(const Mat& m, Subsystem side);

struct EigenSystem {
    std::vector<double> values;  // ascending
    Mat vectors;                 // orthonormal eigenvectors as columns
};

// Closed form for dim 2, cyclic Jacobi for larger Hermitian matrices.
// Throws std::invalid_argument if m is not Hermitian within 1e-10.
EigenSystem hermitian_eigensystem(const Mat& m);

// exp(-i * scale * h) for Hermitian h, via eigendecomposition.
Mat hermitian_exponential(const Mat& h, double scale);

struct MatrixNorms {
    double trace_norm;     // sum of singular values
    double operator_norm;  // largest singular value
    double frobenius_norm; // sqrt(sum |entries|^2)
};

MatrixNorms norms(const Mat& m);

}  // namespace zeno_otto
