#include "maxsum/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "maxsum/combine.hpp"
#include "maxsum/rng.hpp"

namespace maxsum {

namespace {

double eb_statistic(const Matrix& X, const Vector& y) {
    return (X.transpose() * y).squaredNorm() / y.squaredNorm();
}

// Columns centered and scaled to unit sample variance, then projected on y.
double max_statistic(const Dataset& data, double sigma2) {
    const Index n = data.n();
    Matrix standardized = data.X.rowwise() - data.X.colwise().mean();
    for (Index j = 0; j < standardized.cols(); ++j) {
        const double sd =
            std::sqrt(standardized.col(j).squaredNorm() / static_cast<double>(n - 1));
        if (sd == 0.0) {
            throw DegenerateError("column " + std::to_string(j) + " has zero variance");
        }
        standardized.col(j) /= sd;
    }
    const Vector projections =
        (standardized.transpose() * data.y) / std::sqrt(static_cast<double>(n));
    const double largest = projections.cwiseAbs().maxCoeff();
    return largest * largest / sigma2;
}

double y_sample_variance(const Dataset& data) {
    const double mean = data.y.mean();
    return (data.y.array() - mean).square().sum() /
           static_cast<double>(data.n() - 1);
}

}  // namespace

BaselineInternals baseline_internals(const Dataset& data) {
    validate(data);
    if (data.n() < 3) throw DimensionError("baseline statistics need n >= 3");
    if (data.y.squaredNorm() == 0.0) {
        throw DegenerateError("baseline statistics need a nonzero response");
    }
    BaselineInternals internals;
    internals.t_eb = eb_statistic(data.X, data.y);
    internals.sigma2_hat = y_sample_variance(data);
    if (internals.sigma2_hat == 0.0) {
        throw DegenerateError("response has zero variance");
    }
    internals.t_max = max_statistic(data, internals.sigma2_hat);
    return internals;
}

TestReport test_eb(const Dataset& data, int B_perm, std::uint64_t seed) {
    validate(data);
    if (B_perm < 100) throw DomainError("permutation calibration needs B >= 100");
    if (data.y.squaredNorm() == 0.0) {
        throw DegenerateError("test_eb() needs a nonzero response");
    }
    const Index n = data.n();
    const double observed = eb_statistic(data.X, data.y);
    const double yty = data.y.squaredNorm();

    constexpr int k_chunk = 256;
    Matrix permuted(n, k_chunk);
    Matrix projections(data.p(), k_chunk);
    std::vector<Index> order(static_cast<std::size_t>(n));
    long exceed = 0;
    for (int start = 0; start < B_perm; start += k_chunk) {
        const int width = std::min(k_chunk, B_perm - start);
        for (int b = 0; b < width; ++b) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(start + b));
            std::iota(order.begin(), order.end(), Index{0});
            for (Index i = n - 1; i > 0; --i) {
                const Index j =
                    static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
                std::swap(order[i], order[j]);
            }
            for (Index i = 0; i < n; ++i) permuted(i, b) = data.y[order[i]];
        }
        projections.leftCols(width).noalias() =
            data.X.transpose() * permuted.leftCols(width);
        for (int b = 0; b < width; ++b) {
            if (projections.col(b).squaredNorm() / yty >= observed) ++exceed;
        }
    }
    const double pvalue =
        (1.0 + static_cast<double>(exceed)) / (static_cast<double>(B_perm) + 1.0);
    return make_report(Method::EB, observed, pvalue, Calibration::Permutation,
                       {{"B", static_cast<double>(B_perm)}});
}

TestReport test_max(const Dataset& data) {
    validate(data);
    if (data.n() < 3) throw DimensionError("test_max() needs n >= 3");
    const double sigma2 = y_sample_variance(data);
    if (sigma2 == 0.0) throw DegenerateError("response has zero variance");
    const double statistic = max_statistic(data, sigma2);
    return make_report(Method::MAX, statistic, gumbel_pvalue(statistic, data.p()),
                       Calibration::Gumbel, {{"sigma2_hat", sigma2}});
}

TestReport test_com(const Dataset& data, int B_perm, std::uint64_t seed) {
    const TestReport eb = test_eb(data, B_perm, seed);
    const TestReport max = test_max(data);
    const CombinationResult combined = minp_combine(eb.pvalue, max.pvalue);
    return make_report(Method::COM, combined.t_combined, combined.p_combined,
                       Calibration::MinP,
                       {{"p_EB", eb.pvalue}, {"p_MAX", max.pvalue}});
}

}  // namespace maxsum
