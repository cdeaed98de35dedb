#pragma once

#include "esccnn/dataset.hpp"

namespace esccnn {

struct LsqSolution {
    Matrix coefficients;  // P x H
    Vector residual_sse;  // per output column, recomputed from the residual
    Eigen::Index rank = 0;
};

/**
 * Minimum-norm least squares: argmin_B |targets - design B| via a
 * rank-revealing orthogonal factorization. Singular values below
 * rcond * sigma_max with rcond = eps * max(N, P) are treated as zero, so a
 * rank-deficient design is not an error; the minimum-norm solution is
 * returned and the detected rank reported. Residuals are recomputed
 * explicitly from (targets - design B), not read off the factorization.
 */
LsqSolution solve_lsq(const Matrix& design, const Matrix& targets);

}  // namespace esccnn
