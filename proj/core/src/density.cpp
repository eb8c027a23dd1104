#include "zeno_otto/density.hpp"

#include <cmath>

namespace zeno_otto {

DensityOperator::DensityOperator(Mat m) : m_(std::move(m)) {
    if (!m_.all_finite()) throw InvariantViolation("density operator has non-finite entries");
    if (!m_.is_hermitian(kHermiticityTol)) {
        throw InvariantViolation("density operator is not Hermitian within 1e-10");
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw InvariantViolation("density operator trace deviates from 1 by " +
                                 std::to_string(tr - 1.0));
    }
    min_eig_ = hermitian_eigensystem(m_).values.front();
    if (min_eig_ < kPositivitySlack) {
        throw InvariantViolation("density operator minimum eigenvalue " +
                                 std::to_string(min_eig_) + " below -1e-9 slack");
    }
}

DensityOperator conjugate(const Mat& u, const DensityOperator& rho) {
    return DensityOperator(u * rho.matrix() * u.dagger());
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    return 0.5 * norms(a.matrix() - b.matrix()).trace_norm;
}

}  // namespace zeno_otto
