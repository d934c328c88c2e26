#pragma once

#include <cstdint>

#include "maxsum/model.hpp"
#include "maxsum/rng.hpp"

namespace maxsum {

// Banded-covariance precision estimate. omega_hat inverts
// band(sample_covariance(X), band_k) + ridge_tau * I.
struct BandedPrecision {
    Matrix omega_hat;
    int band_k = 0;
    double ridge_tau = 0.0;
};

struct PrecisionOptions {
    int splits = 50;
    int kmax = 20;  // effective grid is 0..min(kmax, p-1)
    double ridge_floor = 1e-6;
    double residual_tol = 1e-8;
};

// Zero out entries with |i - j| > k.
Matrix band(const Matrix& S, int k);

// Columns centered by their means, divisor n-1.
Matrix sample_covariance(const Matrix& X);

// Random-split cross-validation of the bandwidth: risk(k) is the Frobenius
// distance between the banded train-half covariance and the validation-half
// covariance, averaged over splits; ties break toward smaller k. Split s
// shuffles with substream (seed, s).
int cv_band_select(const Matrix& X, int splits, int kmax, std::uint64_t seed);

BandedPrecision estimate_precision(const Matrix& X, const PrecisionOptions& options,
                                   std::uint64_t seed);

}  // namespace maxsum
