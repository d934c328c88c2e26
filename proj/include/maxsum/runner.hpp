#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "maxsum/baselines.hpp"
#include "maxsum/combine.hpp"
#include "maxsum/maxtest.hpp"
#include "maxsum/model.hpp"
#include "maxsum/precision.hpp"
#include "maxsum/ranks.hpp"
#include "maxsum/sumtest.hpp"

namespace maxsum {

struct RunnerOptions {
    int bootstrap_B = 2000;
    int perm_B = 500;
    Calibration rm_calibration = Calibration::Multiplier;
    PrecisionOptions precision{};
    // Diagnostics only: use this precision matrix instead of estimating one.
    const Matrix* omega_oracle = nullptr;
};

// Runs any subset of the eight methods on one dataset, computing ranks, the
// Gram matrix, the max-test bases and the precision estimate once each.
// Method-level randomness is keyed by (seed, replicate, method tag), so the
// draws a method consumes do not depend on which other methods run.
//
// Holds a reference to the dataset; keep the dataset alive while using it.
class TestRunner {
public:
    TestRunner(const Dataset& data, const RunnerOptions& options,
               std::uint64_t seed, std::uint64_t replicate);

    const TestReport& report(Method method);

    // Raw statistics for the joint-limit diagnostics.
    double statistic_rs();
    double statistic_rm1();
    double statistic_rm2();

    const BandedPrecision& precision();

private:
    const Matrix& gram();
    const MaxBasis& basis_rm1();
    const MaxBasis& basis_rm2();
    const SumTestInternals& internals_rs();
    const MaxTestInternals& internals_rm1();
    const MaxTestInternals& internals_rm2();
    std::uint64_t method_seed(std::uint64_t tag) const;
    TestReport compute(Method method);

    const Dataset& data_;
    RunnerOptions options_;
    std::uint64_t seed_;
    std::uint64_t replicate_;
    ScoreVector score_;

    std::optional<Matrix> gram_;
    std::optional<MaxBasis> basis_rm1_;
    std::optional<MaxBasis> basis_rm2_;
    std::optional<BandedPrecision> precision_;
    std::optional<SumTestInternals> rs_;
    std::optional<MaxTestInternals> rm1_;
    std::optional<MaxTestInternals> rm2_;
    std::map<Method, TestReport> reports_;
};

}  // namespace maxsum
