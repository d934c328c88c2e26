#pragma once

#include <cstdint>

#include "maxsum/model.hpp"

namespace maxsum {

struct BaselineInternals {
    double t_eb = 0.0;
    double t_max = 0.0;
    double sigma2_hat = 0.0;  // sample variance of y
};

// Statistics alone, no calibration; works for any p >= 1.
BaselineInternals baseline_internals(const Dataset& data);

// Least-squares score statistic T_EB = (y^T X X^T y) / (y^T y), calibrated by
// permuting y; permutation b draws from substream (seed, b).
TestReport test_eb(const Dataset& data, int B_perm, std::uint64_t seed);

// Max squared projection max_j (x_j^T y / sqrt(n))^2 / sigma2_hat over columns
// standardized to zero mean and unit sample variance, Gumbel-calibrated.
TestReport test_max(const Dataset& data);

// Min-p combination of EB and MAX.
TestReport test_com(const Dataset& data, int B_perm, std::uint64_t seed);

}  // namespace maxsum
