#include "maxsum/sumtest.hpp"

#include <cmath>

namespace maxsum {

Matrix centered_gram(const Matrix& X) {
    const Matrix centered = X.rowwise() - X.colwise().mean();
    Matrix gram = Matrix::Zero(X.rows(), X.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(centered);
    gram.triangularView<Eigen::Upper>() = gram.transpose();
    return gram;
}

double rank_sum_ustat(const Matrix& X, const ScoreVector& score) {
    const Index n = X.rows();
    if (n < 2) throw DimensionError("rank_sum_ustat() needs n >= 2");
    if (score.n() != n) {
        throw LengthMismatch("score vector length does not match rows of X");
    }
    const Vector s = X.transpose() * score.e;
    const double cross = s.squaredNorm();
    const double diag =
        (X.rowwise().squaredNorm().array() * score.e.array().square()).sum();
    return (cross - diag) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

double trace_sigma2_bruteforce(const Matrix& X) {
    const Index n = X.rows();
    if (n < 4) throw DimensionError("trace estimator needs n >= 4");
    double total = 0.0;
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
            if (b == a) continue;
            for (Index c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                const auto d_ab = X.row(a) - X.row(b);
                const auto d_cb = X.row(c) - X.row(b);
                for (Index d = 0; d < n; ++d) {
                    if (d == a || d == b || d == c) continue;
                    total += d_ab.dot(X.row(c) - X.row(d)) *
                             d_cb.dot(X.row(a) - X.row(d));
                }
            }
        }
    const double perms = static_cast<double>(n) * (n - 1) * (n - 2) * (n - 3);
    return total / (2.0 * perms);
}

double trace_sigma2_hat_from_gram(const Matrix& gram) {
    const Index n = gram.rows();
    if (n < 4) throw DimensionError("trace estimator needs n >= 4");
    const Vector diag = gram.diagonal();
    const Vector row_sums = gram.rowwise().sum();

    const double trace_a = diag.sum();
    const double grand = row_sums.sum();
    const double frob2 = gram.squaredNorm();
    const double diag2 = diag.squaredNorm();

    const double s2 = frob2 - diag2;
    const double t3 = row_sums.squaredNorm() - 2.0 * diag.dot(row_sums) - frob2 +
                      2.0 * diag2;
    const double off_grand = grand - trace_a;
    const double d4 = off_grand * off_grand -
                      4.0 * (row_sums - diag).squaredNorm() + 2.0 * s2;

    const double nn = static_cast<double>(n);
    const double perms = nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0);
    return ((nn - 2.0) * (nn - 3.0) * s2 - 2.0 * (nn - 3.0) * t3 + d4) / perms;
}

double trace_sigma2_hat(const Matrix& X) {
    if (X.rows() < 4) throw DimensionError("trace estimator needs n >= 4");
    return trace_sigma2_hat_from_gram(centered_gram(X));
}

SumTestInternals rs_internals(const Matrix& X, const ScoreVector& score,
                              const Matrix* gram) {
    SumTestInternals out;
    out.w_n = rank_sum_ustat(X, score);
    out.trace_hat = gram ? trace_sigma2_hat_from_gram(*gram) : trace_sigma2_hat(X);
    if (!std::isfinite(out.trace_hat) || out.trace_hat <= 0.0) {
        throw DegenerateError("tr(Sigma^2) estimate is not positive; "
                              "X needs at least two linearly independent rows");
    }
    out.t_rs = static_cast<double>(X.rows()) * out.w_n /
               std::sqrt(2.0 * out.trace_hat);
    return out;
}

TestReport test_rs(const Dataset& data) {
    validate(data);
    if (data.n() < 4) throw DimensionError("test_rs() needs n >= 4");
    const ScoreVector score = wilcoxon_scores(data.y);
    const SumTestInternals internals = rs_internals(data.X, score);
    return make_report(Method::RS, internals.t_rs,
                       normal_upper_tail(internals.t_rs), Calibration::Normal,
                       {{"w_n", internals.w_n}, {"trace_hat", internals.trace_hat}});
}

}  // namespace maxsum
