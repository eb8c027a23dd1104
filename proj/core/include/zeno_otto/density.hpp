#pragma once

#include "zeno_otto/matrix.hpp"

namespace zeno_otto {

// A validated quantum state. Construction checks Hermiticity (1e-10),
// unit trace (1e-10) and positivity down to the -1e-9 numerical slack;
// anything below the slack raises InvariantViolation instead of being clipped.
class DensityOperator {
public:
    static constexpr double kHermiticityTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivitySlack = -1e-9;

    explicit DensityOperator(Mat m);

    const Mat& matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    double min_eigenvalue() const { return min_eig_; }

private:
    Mat m_;
    double min_eig_ = 0.0;
};

// U rho U^dagger.
DensityOperator conjugate(const Mat& u, const DensityOperator& rho);

// (1/2) ||a - b||_1 for states.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace zeno_otto
