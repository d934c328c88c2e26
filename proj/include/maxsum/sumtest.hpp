#pragma once

#include "maxsum/model.hpp"
#include "maxsum/ranks.hpp"

namespace maxsum {

struct SumTestInternals {
    double w_n = 0.0;        // rank-score U-statistic
    double trace_hat = 0.0;  // estimate of tr(Sigma^2)
    double t_rs = 0.0;       // n * w_n / sqrt(2 * trace_hat)
};

// Degree-2 U-statistic over ordered pairs,
//   W_n = (1/(n(n-1))) * sum_{i != k} (X_i . X_k) e_i e_k,
// computed in O(np) via
// ||sum_i e_i X_i||^2 = sum_i e_i^2 ||X_i||^2 + sum_{i != k} (X_i . X_k) e_i e_k.
// This normalization makes n W_n match sum_j xi_j^2 - tr(Sigma) to first
// order, so T_RS is standard normal under the null.
double rank_sum_ustat(const Matrix& X, const ScoreVector& score);

// Quadruple-sum estimator of tr(Sigma^2) over all ordered 4-tuples of
// distinct row indices, evaluated literally in O(n^4 p). Oracle for the
// efficient version below.
double trace_sigma2_bruteforce(const Matrix& X);

// Same value in O(n^2 p + n^2): expand the quadruple product over the Gram
// matrix A = X X^T and reduce each distinct-index pattern by
// inclusion-exclusion. With P = n(n-1)(n-2)(n-3),
//   trace_hat = [ (n-2)(n-3) S2 - 2(n-3) T3 + D4 ] / P,
//   S2 = sum_{i != j} A_ij^2,
//   T3 = sum over distinct (i,j,k) of A_ij A_jk,
//   D4 = sum over distinct (i,j,k,l) of A_ij A_kl.
double trace_sigma2_hat(const Matrix& X);

// Gram matrix of the column-centered data. Centering leaves the estimator
// unchanged (it only sees row differences) and avoids cancellation when the
// columns carry large means.
Matrix centered_gram(const Matrix& X);

// Reduction step on a precomputed centered Gram matrix.
double trace_sigma2_hat_from_gram(const Matrix& gram);

// gram, when provided, must equal centered_gram(X).
SumTestInternals rs_internals(const Matrix& X, const ScoreVector& score,
                              const Matrix* gram = nullptr);

// Standardized sum-type statistic with upper-tail normal calibration.
TestReport test_rs(const Dataset& data);

}  // namespace maxsum
