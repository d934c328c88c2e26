#include "maxsum/precision.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace maxsum {

Matrix band(const Matrix& S, int k) {
    if (S.rows() != S.cols()) throw DomainError("band() needs a square matrix");
    if (k < 0 || k > S.rows() - 1) {
        throw DomainError("bandwidth k must lie in [0, p-1]");
    }
    Matrix banded = S;
    const Index p = S.rows();
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < p; ++i) {
            if (std::abs(static_cast<long>(i - j)) > k) banded(i, j) = 0.0;
        }
    }
    return banded;
}

Matrix sample_covariance(const Matrix& X) {
    const Index n = X.rows();
    if (n < 2) throw DimensionError("sample covariance needs n >= 2");
    const Matrix centered = X.rowwise() - X.colwise().mean();
    Matrix cov = Matrix::Zero(X.cols(), X.cols());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    cov.triangularView<Eigen::Upper>() = cov.transpose();
    return cov / static_cast<double>(n - 1);
}

namespace {

// Covariance of the rows listed in `rows` from raw cross-products:
// (G - m * mu mu^T) / (m - 1), with G and column sums taken over the subset.
Matrix subset_covariance(const Matrix& raw_gram, const Vector& col_sums, Index m) {
    const Vector mean = col_sums / static_cast<double>(m);
    Matrix cov = raw_gram;
    cov.noalias() -= static_cast<double>(m) * mean * mean.transpose();
    return cov / static_cast<double>(m - 1);
}

// Sum of squared entries on each |i-j| = d band pair, for all d at once.
std::vector<double> banded_square_sums(const Matrix& M) {
    const Index p = M.rows();
    std::vector<double> sums(static_cast<std::size_t>(p), 0.0);
    sums[0] = M.diagonal().squaredNorm();
    for (Index d = 1; d < p; ++d) {
        double s = 0.0;
        for (Index i = 0; i + d < p; ++i) {
            const double lower = M(i + d, i);
            const double upper = M(i, i + d);
            s += lower * lower + upper * upper;
        }
        sums[static_cast<std::size_t>(d)] = s;
    }
    return sums;
}

}  // namespace

int cv_band_select(const Matrix& X, int splits, int kmax, std::uint64_t seed) {
    const Index n = X.rows();
    const Index p = X.cols();
    if (n < 8) throw DomainError("cv_band_select() needs n >= 8");
    if (splits < 2) throw DomainError("cv_band_select() needs splits >= 2");
    if (kmax < 0) throw DomainError("kmax must be nonnegative");
    const int k_top = std::min<int>(kmax, static_cast<int>(p) - 1);
    if (k_top == 0) return 0;

    Matrix raw_total = Matrix::Zero(p, p);
    raw_total.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
    raw_total.triangularView<Eigen::Upper>() = raw_total.transpose();
    const Vector sums_total = X.colwise().sum();

    const Index m_train = (n + 1) / 2;
    const Index m_valid = n - m_train;

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::vector<double> avg_risk(static_cast<std::size_t>(k_top) + 1, 0.0);
    Matrix train_rows(m_train, p);

    for (int s = 0; s < splits; ++s) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(s));
        std::iota(order.begin(), order.end(), Index{0});
        for (Index i = n - 1; i > 0; --i) {
            const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }
        for (Index i = 0; i < m_train; ++i) train_rows.row(i) = X.row(order[i]);

        Matrix raw_train = Matrix::Zero(p, p);
        raw_train.selfadjointView<Eigen::Lower>().rankUpdate(train_rows.transpose());
        raw_train.triangularView<Eigen::Upper>() = raw_train.transpose();
        const Vector sums_train = train_rows.colwise().sum();

        const Matrix cov_train = subset_covariance(raw_train, sums_train, m_train);
        const Matrix cov_valid = subset_covariance(raw_total - raw_train,
                                                   sums_total - sums_train, m_valid);

        // risk^2(k) = sum_{d<=k} ||diff on band d||^2 + sum_{d>k} ||valid on band d||^2
        const std::vector<double> diff_sq = banded_square_sums(cov_train - cov_valid);
        const std::vector<double> valid_sq = banded_square_sums(cov_valid);
        double tail = 0.0;
        for (Index d = static_cast<Index>(k_top) + 1; d < p; ++d) {
            tail += valid_sq[static_cast<std::size_t>(d)];
        }
        std::vector<double> risk2(static_cast<std::size_t>(k_top) + 1);
        for (int k = k_top; k >= 0; --k) {
            risk2[static_cast<std::size_t>(k)] = tail;
            tail += valid_sq[static_cast<std::size_t>(k)];
        }
        double head = 0.0;
        for (int k = 0; k <= k_top; ++k) {
            head += diff_sq[static_cast<std::size_t>(k)];
            avg_risk[static_cast<std::size_t>(k)] +=
                std::sqrt(head + risk2[static_cast<std::size_t>(k)]);
        }
    }

    int best = 0;
    for (int k = 1; k <= k_top; ++k) {
        if (avg_risk[static_cast<std::size_t>(k)] < avg_risk[static_cast<std::size_t>(best)]) {
            best = k;
        }
    }
    return best;
}

BandedPrecision estimate_precision(const Matrix& X, const PrecisionOptions& options,
                                   std::uint64_t seed) {
    const Index n = X.rows();
    const Index p = X.cols();
    if (n < 8) throw DimensionError("estimate_precision() needs n >= 8");
    if (p < 1) throw DimensionError("estimate_precision() needs p >= 1");
    if (!X.allFinite()) throw NonFiniteError("X contains NaN or Inf");

    BandedPrecision result;
    result.band_k = (p == 1) ? 0 : cv_band_select(X, options.splits, options.kmax, seed);

    Matrix banded = band(sample_covariance(X), result.band_k);
    banded = ((banded + banded.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> eigensolver(banded,
                                                      Eigen::EigenvaluesOnly);
    const double lambda_min = eigensolver.eigenvalues().minCoeff();
    result.ridge_tau =
        lambda_min < options.ridge_floor ? options.ridge_floor - lambda_min : 0.0;

    const Matrix regularized =
        banded + result.ridge_tau * Matrix::Identity(p, p);
    Eigen::LLT<Matrix> llt(regularized);
    if (llt.info() != Eigen::Success) {
        throw SingularError("banded covariance is not positive definite after ridging");
    }
    Matrix omega = llt.solve(Matrix::Identity(p, p));
    omega = ((omega + omega.transpose()) / 2.0).eval();

    const double residual =
        (regularized * omega - Matrix::Identity(p, p)).cwiseAbs().maxCoeff();
    if (!(residual <= options.residual_tol)) {
        throw SingularError("precision inversion residual " + std::to_string(residual) +
                            " exceeds tolerance");
    }
    result.omega_hat = std::move(omega);
    return result;
}

}  // namespace maxsum
