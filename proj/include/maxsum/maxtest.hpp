#pragma once

#include <cstdint>

#include "maxsum/model.hpp"
#include "maxsum/ranks.hpp"
#include "maxsum/rng.hpp"

namespace maxsum {

enum class MaxVariant { RM1, RM2 };

struct MaxTestInternals {
    Vector coords;           // w_j (RM1) or W_j (RM2)
    double statistic = 0.0;  // max_j coords_j^2
    double c_n = 0.0;        // sqrt((n+1)/(n-1))
};

// Shared basis for a max-type statistic: observed coordinates are
// c_n * U^T e, multiplier replicates are max_j (U^T g)_j^2 with g ~ N(0, I_n).
// For RM1, U's columns are the centered covariate columns scaled to unit
// norm; for RM2 they are the centered columns of X * Omega_hat scaled by
// 1/sqrt(n * omega_jj).
struct MaxBasis {
    Matrix U;
    double c_n = 0.0;
};

MaxBasis rm1_basis(const Matrix& X);
MaxBasis rm2_basis(const Matrix& X, const Matrix& omega_hat);

// Studentized rank-score correlations w_j against each centered column.
Vector marginal_coords(const Matrix& X, const ScoreVector& score);

// Precision-adjusted coordinates W_j from the columns of X * Omega_hat.
Vector precision_coords(const Matrix& X, const ScoreVector& score,
                        const Matrix& omega_hat);

MaxTestInternals max_internals(const MaxBasis& basis, const ScoreVector& score);

// 1 - F(statistic - 2 log p + log log p) with F the limiting Gumbel c.d.f.
double gumbel_pvalue(double statistic, Index p);

// Gaussian multiplier p-value (1 + #{T_b >= observed}) / (B + 1); replicate b
// draws from substream (seed, b), so replicates can run in any order.
double multiplier_pvalue(const Matrix& X, MaxVariant variant, double observed,
                         int B, std::uint64_t seed,
                         const Matrix* omega_hat = nullptr);
double multiplier_pvalue_from_basis(const Matrix& U, double observed, int B,
                                    std::uint64_t seed);

struct MaxOptions {
    Calibration calibration = Calibration::Multiplier;
    int bootstrap_B = 2000;
};

TestReport test_rm1(const Dataset& data, std::uint64_t seed,
                    const MaxOptions& options = {});
TestReport test_rm2(const Dataset& data, const Matrix& omega_hat,
                    std::uint64_t seed, const MaxOptions& options = {});

}  // namespace maxsum
