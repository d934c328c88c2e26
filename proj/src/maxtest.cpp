#include "maxsum/maxtest.hpp"

#include <algorithm>
#include <cmath>

namespace maxsum {

namespace {

double studentizing_factor(Index n) {
    return std::sqrt(static_cast<double>(n + 1) / static_cast<double>(n - 1));
}

void check_precision_input(const Matrix& omega_hat, Index p) {
    if (omega_hat.rows() != p || omega_hat.cols() != p) {
        throw BadPrecision("Omega_hat must be p x p");
    }
    if (!omega_hat.allFinite()) throw BadPrecision("Omega_hat contains NaN or Inf");
    for (Index j = 0; j < p; ++j) {
        if (!(omega_hat(j, j) > 0.0)) {
            throw BadPrecision("Omega_hat diagonal entry " + std::to_string(j) +
                               " is not positive");
        }
    }
    const double scale = omega_hat.cwiseAbs().maxCoeff();
    if ((omega_hat - omega_hat.transpose()).cwiseAbs().maxCoeff() >
        1e-8 * std::max(1.0, scale)) {
        throw BadPrecision("Omega_hat is not symmetric");
    }
}

}  // namespace

MaxBasis rm1_basis(const Matrix& X) {
    const Index n = X.rows();
    if (n < 3) throw DimensionError("max-type statistics need n >= 3");
    MaxBasis basis;
    basis.c_n = studentizing_factor(n);
    basis.U = X.rowwise() - X.colwise().mean();
    for (Index j = 0; j < basis.U.cols(); ++j) {
        const double norm = basis.U.col(j).norm();
        if (norm == 0.0) throw ZeroVarianceColumn(static_cast<std::size_t>(j));
        basis.U.col(j) /= norm;
    }
    return basis;
}

MaxBasis rm2_basis(const Matrix& X, const Matrix& omega_hat) {
    const Index n = X.rows();
    if (n < 3) throw DimensionError("max-type statistics need n >= 3");
    check_precision_input(omega_hat, X.cols());
    MaxBasis basis;
    basis.c_n = studentizing_factor(n);
    Matrix transformed = X * omega_hat;
    basis.U = transformed.rowwise() - transformed.colwise().mean();
    for (Index j = 0; j < basis.U.cols(); ++j) {
        basis.U.col(j) /= std::sqrt(static_cast<double>(n) * omega_hat(j, j));
    }
    return basis;
}

Vector marginal_coords(const Matrix& X, const ScoreVector& score) {
    if (score.n() != X.rows()) {
        throw LengthMismatch("score vector length does not match rows of X");
    }
    const MaxBasis basis = rm1_basis(X);
    return basis.c_n * (basis.U.transpose() * score.e);
}

Vector precision_coords(const Matrix& X, const ScoreVector& score,
                        const Matrix& omega_hat) {
    if (score.n() != X.rows()) {
        throw LengthMismatch("score vector length does not match rows of X");
    }
    const MaxBasis basis = rm2_basis(X, omega_hat);
    return basis.c_n * (basis.U.transpose() * score.e);
}

MaxTestInternals max_internals(const MaxBasis& basis, const ScoreVector& score) {
    MaxTestInternals internals;
    internals.c_n = basis.c_n;
    internals.coords = basis.c_n * (basis.U.transpose() * score.e);
    const double largest = internals.coords.cwiseAbs().maxCoeff();
    internals.statistic = largest * largest;
    return internals;
}

double gumbel_pvalue(double statistic, Index p) {
    return GumbelCalibration(p).upper_tail(statistic);
}

double multiplier_pvalue_from_basis(const Matrix& U, double observed, int B,
                                    std::uint64_t seed) {
    if (B < 100) throw DomainError("multiplier bootstrap needs B >= 100");
    const Index n = U.rows();
    constexpr int k_chunk = 512;
    Matrix draws(n, k_chunk);
    Matrix coords(U.cols(), k_chunk);
    long exceed = 0;
    for (int start = 0; start < B; start += k_chunk) {
        const int width = std::min(k_chunk, B - start);
        for (int b = 0; b < width; ++b) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(start + b));
            for (Index i = 0; i < n; ++i) draws(i, b) = rng.normal();
        }
        coords.leftCols(width).noalias() = U.transpose() * draws.leftCols(width);
        for (int b = 0; b < width; ++b) {
            const double largest = coords.col(b).cwiseAbs().maxCoeff();
            if (largest * largest >= observed) ++exceed;
        }
    }
    return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(B) + 1.0);
}

double multiplier_pvalue(const Matrix& X, MaxVariant variant, double observed,
                         int B, std::uint64_t seed, const Matrix* omega_hat) {
    if (variant == MaxVariant::RM2 && omega_hat == nullptr) {
        throw BadPrecision("RM2 multiplier bootstrap requires Omega_hat");
    }
    const MaxBasis basis = variant == MaxVariant::RM1
                               ? rm1_basis(X)
                               : rm2_basis(X, *omega_hat);
    return multiplier_pvalue_from_basis(basis.U, observed, B, seed);
}

namespace {

TestReport max_report(Method method, const MaxBasis& basis,
                      const ScoreVector& score, std::uint64_t seed,
                      const MaxOptions& options) {
    const MaxTestInternals internals = max_internals(basis, score);
    double pvalue = 0.0;
    std::map<std::string, double> aux;
    if (options.calibration == Calibration::Multiplier) {
        pvalue = multiplier_pvalue_from_basis(basis.U, internals.statistic,
                                              options.bootstrap_B, seed);
        aux["B"] = options.bootstrap_B;
    } else if (options.calibration == Calibration::Gumbel) {
        pvalue = gumbel_pvalue(internals.statistic, basis.U.cols());
    } else {
        throw DomainError("max-type tests support gumbel or multiplier calibration");
    }
    return make_report(method, internals.statistic, pvalue, options.calibration,
                       std::move(aux));
}

}  // namespace

TestReport test_rm1(const Dataset& data, std::uint64_t seed,
                    const MaxOptions& options) {
    validate(data);
    const ScoreVector score = wilcoxon_scores(data.y);
    return max_report(Method::RM1, rm1_basis(data.X), score, seed, options);
}

TestReport test_rm2(const Dataset& data, const Matrix& omega_hat,
                    std::uint64_t seed, const MaxOptions& options) {
    validate(data);
    const ScoreVector score = wilcoxon_scores(data.y);
    return max_report(Method::RM2, rm2_basis(data.X, omega_hat), score, seed,
                      options);
}

}  // namespace maxsum
