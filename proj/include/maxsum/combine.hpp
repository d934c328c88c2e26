#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxsum/maxtest.hpp"
#include "maxsum/model.hpp"

namespace maxsum {

struct CombinationComponent {
    std::string label;
    double pvalue = 0.0;
    double weight = 0.0;
};

struct CombinationResult {
    double t_combined = 0.0;
    double p_combined = 0.0;
    std::vector<CombinationComponent> components;
};

// T = sum_k w_k tan((1/2 - p_k) pi), p_combined = 1/2 - arctan(T)/pi.
// Weights default to equal and are normalized to sum 1; every p must lie in
// the open interval (0,1).
CombinationResult cauchy_combine(const std::vector<double>& pvalues,
                                 std::vector<double> weights = {});

// p_combined = 1 - (1 - min(p1,p2))^2, valid under asymptotic independence.
CombinationResult minp_combine(double p1, double p2);

// Pulls a component p-value into the open interval before tan(): values from
// a B-replicate resampling calibration are clamped to
// [1/(10B), 1 - 1/(10B)], everything else just away from exact 0/1.
double tan_safe_pvalue(const TestReport& report);

// Cauchy combination of an already-computed sum-type and max-type report.
TestReport combine_reports(Method method, const TestReport& sum_part,
                           const TestReport& max_part);

// RS + RM1 (resp. RS + RM2) with equal weights; `seed` feeds the max-type
// multiplier bootstrap unchanged, so components match standalone runs.
TestReport test_rc1(const Dataset& data, std::uint64_t seed,
                    const MaxOptions& options = {});
TestReport test_rc2(const Dataset& data, const Matrix& omega_hat,
                    std::uint64_t seed, const MaxOptions& options = {});

}  // namespace maxsum
