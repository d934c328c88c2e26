#include "maxsum/dgp.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace maxsum {

Matrix covariance_matrix(const CovarianceSpec& spec) {
    if (!(std::abs(spec.rho) < 1.0)) throw DomainError("AR(1) needs |rho| < 1");
    if (spec.p < 1) throw DomainError("covariance needs p >= 1");
    Matrix sigma(spec.p, spec.p);
    for (Index j = 0; j < spec.p; ++j) {
        sigma(j, j) = 1.0;
        for (Index i = j + 1; i < spec.p; ++i) {
            const double value = std::pow(spec.rho, static_cast<double>(i - j));
            sigma(i, j) = value;
            sigma(j, i) = value;
        }
    }
    return sigma;
}

CovarianceModel make_covariance(const CovarianceSpec& spec) {
    CovarianceModel model;
    model.sigma = covariance_matrix(spec);
    Eigen::LLT<Matrix> llt(model.sigma);
    if (llt.info() != Eigen::Success) {
        throw SingularError("covariance matrix is not positive definite");
    }
    model.chol = llt.matrixL();
    return model;
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::E1_Normal: return "E1";
        case ErrorKind::E2_StudentT3: return "E2";
        case ErrorKind::E3_LogNormal: return "E3";
        case ErrorKind::E4_Mixture: return "E4";
    }
    return "?";
}

ErrorKind error_kind_from_string(const std::string& name) {
    if (name == "E1") return ErrorKind::E1_Normal;
    if (name == "E2") return ErrorKind::E2_StudentT3;
    if (name == "E3") return ErrorKind::E3_LogNormal;
    if (name == "E4") return ErrorKind::E4_Mixture;
    throw DomainError("unknown error law '" + name + "'");
}

Vector sample_errors(const ErrorSpec& spec, Index n, Rng& rng) {
    if (n < 1) throw DomainError("sample_errors() needs n >= 1");
    Vector eps(n);
    switch (spec.kind) {
        case ErrorKind::E1_Normal:
            for (Index i = 0; i < n; ++i) eps[i] = rng.normal();
            break;
        case ErrorKind::E2_StudentT3:
            // t3 / sqrt(3) = Z / sqrt(Z1^2 + Z2^2 + Z3^2)
            for (Index i = 0; i < n; ++i) {
                double denom = 0.0;
                double numer = 0.0;
                do {
                    numer = rng.normal();
                    const double a = rng.normal();
                    const double b = rng.normal();
                    const double c = rng.normal();
                    denom = a * a + b * b + c * c;
                } while (denom == 0.0);
                eps[i] = numer / std::sqrt(denom);
            }
            break;
        case ErrorKind::E3_LogNormal: {
            const double e1 = std::exp(1.0);
            const double scale = 1.0 / std::sqrt(e1 * (e1 - 1.0));
            const double center = std::exp(0.5);
            for (Index i = 0; i < n; ++i) {
                eps[i] = (std::exp(rng.normal()) - center) * scale;
            }
            break;
        }
        case ErrorKind::E4_Mixture: {
            const double scale = 1.0 / std::sqrt(10.9);
            for (Index i = 0; i < n; ++i) {
                const double u = rng.uniform01();
                const double sd = (u <= 0.1) ? 10.0 : 1.0;
                eps[i] = sd * rng.normal() * scale;
            }
            break;
        }
    }
    return eps;
}

Vector make_beta_design1(Index p, int s, int q, Rng& rng, double norm_target) {
    if (s < 1 || q < 0 || static_cast<Index>(q) + s > p) {
        throw DomainError("design 1 needs s >= 1, q >= 0, q + s <= p");
    }
    if (norm_target < 0.0) throw DomainError("norm target must be nonnegative");
    Vector beta = Vector::Zero(p);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (int j = 0; j < s; ++j) {
            const double draw = rng.normal();
            beta[q + j] = draw;
            norm2 += draw * draw;
        }
    } while (norm2 == 0.0);
    beta *= std::sqrt(norm_target / norm2);
    return beta;
}

Vector make_beta_design2(Index p, int m, Index n, const Matrix& sigma) {
    if (m < 1 || static_cast<Index>(m) > p) throw DomainError("design 2 needs 1 <= m <= p");
    if (sigma.rows() != p || sigma.cols() != p) {
        throw DimensionError("sigma must be p x p");
    }
    const double amplitude =
        2.0 * std::sqrt(2.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
    Vector theta = Vector::Zero(p);
    for (Index j = 0; j < m; ++j) {
        theta[j] = (j % 2 == 0) ? amplitude : -amplitude;  // 1-based odd => +
    }
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) throw SingularError("sigma is not invertible");
    Vector beta = llt.solve(theta);
    if ((sigma * beta - theta).norm() > 1e-8) {
        throw SingularError("linear solve for design 2 did not converge");
    }
    return beta;
}

Dataset generate(Index n, const CovarianceModel& cov, const Vector& beta,
                 const ErrorSpec& error, Rng& rng) {
    const Index p = cov.sigma.rows();
    if (beta.size() != p) throw LengthMismatch("beta length does not match p");
    if (n < 1) throw DomainError("generate() needs n >= 1");
    Matrix z(n, p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();
    }
    Dataset data;
    data.X.noalias() = z * cov.chol.transpose();
    data.y = data.X * beta + sample_errors(error, n, rng);
    return data;
}

}  // namespace maxsum
