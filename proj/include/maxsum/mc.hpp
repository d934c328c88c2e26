#pragma once

#include <cstdint>
#include <vector>

#include "maxsum/dgp.hpp"
#include "maxsum/model.hpp"
#include "maxsum/precision.hpp"
#include "maxsum/runner.hpp"

namespace maxsum {

// Full description of one Monte Carlo campaign.
struct ExperimentConfig {
    Index n = 100;
    Index p = 200;
    CovarianceSpec cov{CovarianceSpec::Kind::AR1, 0.7, 200};
    ErrorSpec error{ErrorKind::E1_Normal};
    SignalSpec signal{};
    std::vector<Method> methods;
    long replications = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int bootstrap_B = 2000;
    int perm_B = 500;
    int workers = 0;  // 0 = logical cores
    PrecisionOptions precision{};
};

void validate_config(const ExperimentConfig& config);

struct MethodCell {
    Method method = Method::RS;
    long rejections = 0;
    long replications = 0;

    double frequency() const {
        return static_cast<double>(rejections) / static_cast<double>(replications);
    }
    double std_error() const;  // sqrt(f(1-f)/replications)
};

struct SizeTable {
    ExperimentConfig config;
    std::vector<MethodCell> cells;
};

struct PowerPoint {
    int signal_count = 0;  // s (design 1) or m (design 2)
    std::vector<MethodCell> cells;
};

struct PowerCurve {
    ExperimentConfig config;
    std::vector<PowerPoint> points;
};

// Joint-tail diagnostic for the sum/max asymptotic independence: Pearson
// correlation of (T_RS, T_max - centering) across replicates plus the 2x2
// joint table at the empirical marginal 10% cutoffs.
struct IndependenceDiag {
    ExperimentConfig config;
    MaxVariant variant = MaxVariant::RM1;
    long replications = 0;
    double correlation = 0.0;
    double joint_upper_upper = 0.0;
    double joint_upper_lower = 0.0;
    double joint_lower_upper = 0.0;
    double joint_lower_lower = 0.0;
    double marginal_fraction = 0.0;  // tail mass used per margin (0.10)
    double sum_rejection_rate = 0.0;  // share with upper-tail normal p < alpha
};

// Null-design campaign: replicate r generates data from substream
// (seed, r, data tag) and runs every configured method on the shared dataset.
SizeTable run_size(const ExperimentConfig& config);

// Power campaign over a grid of signal sizes. Replicate streams are keyed by
// grid_index * replications + r, so every cell is independent. Design 1
// redraws beta each replicate; design 2's signal is deterministic.
PowerCurve run_power(const ExperimentConfig& config, const std::vector<int>& grid);

IndependenceDiag run_independence_diag(const ExperimentConfig& config,
                                       MaxVariant variant);

}  // namespace maxsum
