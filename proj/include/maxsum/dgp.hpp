#pragma once

#include "maxsum/model.hpp"
#include "maxsum/rng.hpp"

namespace maxsum {

// AR(1)/Toeplitz covariance Sigma_jk = rho^|j-k|.
struct CovarianceSpec {
    enum class Kind { AR1 } kind = Kind::AR1;
    double rho = 0.7;
    Index p = 1;
};

Matrix covariance_matrix(const CovarianceSpec& spec);

// Sigma plus its lower Cholesky factor, computed once per configuration.
struct CovarianceModel {
    Matrix sigma;
    Matrix chol;
};

CovarianceModel make_covariance(const CovarianceSpec& spec);

enum class ErrorKind { E1_Normal, E2_StudentT3, E3_LogNormal, E4_Mixture };

struct ErrorSpec {
    ErrorKind kind = ErrorKind::E1_Normal;
};

const char* to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& name);

// i.i.d. draws from the standardized law (mean 0, variance 1 by construction).
Vector sample_errors(const ErrorSpec& spec, Index n, Rng& rng);

enum class SignalDesign { Null, DenseRandom, ThetaPattern };

struct SignalSpec {
    SignalDesign design = SignalDesign::Null;
    int count = 0;             // s (design 1) or m (design 2)
    int offset = 0;            // q: support starts after this many coordinates
    double norm_target = 0.8;  // ||beta||^2 for design 1
};

// beta_j ~ N(0,1) on positions offset+1..offset+s (1-based), zero elsewhere,
// rescaled so ||beta||^2 equals norm_target exactly.
Vector make_beta_design1(Index p, int s, int q, Rng& rng, double norm_target = 0.8);

// theta alternates +1/-1 on the first m coordinates, scaled by
// 2 sqrt(2 log p / n); returns beta solving Sigma beta = theta.
Vector make_beta_design2(Index p, int m, Index n, const Matrix& sigma);

// X rows i.i.d. N(0, Sigma) via the Cholesky factor, y = X beta + eps.
// Stream order: the n x p normal block for X first, then the errors.
Dataset generate(Index n, const CovarianceModel& cov, const Vector& beta,
                 const ErrorSpec& error, Rng& rng);

}  // namespace maxsum
