#include "esccnn/linsolve.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace esccnn {

LsqSolution solve_lsq(const Matrix& design, const Matrix& targets) {
    if (design.rows() < 1 || design.cols() < 1)
        throw std::invalid_argument("solve_lsq: empty design matrix");
    if (targets.rows() != design.rows())
        throw std::invalid_argument("solve_lsq: row count mismatch between design and targets");
    if (targets.cols() < 1)
        throw std::invalid_argument("solve_lsq: targets need at least one column");
    if (!design.allFinite() || !targets.allFinite())
        throw std::invalid_argument("solve_lsq: non-finite inputs");

    const double rcond = std::numeric_limits<double>::epsilon() *
                         static_cast<double>(std::max(design.rows(), design.cols()));

    Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rcond);

    LsqSolution sol;
    sol.coefficients = svd.solve(targets);
    sol.rank = svd.rank();

    const Matrix residual = targets - design * sol.coefficients;
    sol.residual_sse = residual.colwise().squaredNorm();
    return sol;
}

}  // namespace esccnn
