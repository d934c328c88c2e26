#pragma once

#include <Eigen/Core>

#include <map>
#include <string>

#include "maxsum/errors.hpp"

namespace maxsum {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// One test input: X is n x p with rows as observations, y holds the n
// responses. Immutable by convention once validated.
struct Dataset {
    Matrix X;
    Vector y;

    Index n() const { return X.rows(); }
    Index p() const { return X.cols(); }
};

// Throws DimensionError (n < 2 or p < 1), LengthMismatch (y vs rows of X),
// or NonFiniteError (any NaN/Inf). No side effects.
void validate(const Dataset& data);

enum class Method { RS, RM1, RM2, RC1, RC2, EB, MAX, COM };
enum class Calibration { Normal, Gumbel, Multiplier, Permutation, Cauchy, MinP };

const char* to_string(Method method);
const char* to_string(Calibration calibration);
Method method_from_string(const std::string& name);

// Which calibrations each method may legitimately report.
bool calibration_allowed(Method method, Calibration calibration);

struct TestReport {
    Method method = Method::RS;
    double statistic = 0.0;
    double pvalue = 1.0;
    Calibration calibration = Calibration::Normal;
    std::map<std::string, double> aux;
};

// Checked constructor: enforces pvalue in [0,1] and method/calibration
// consistency.
TestReport make_report(Method method, double statistic, double pvalue,
                       Calibration calibration,
                       std::map<std::string, double> aux = {});

// Centering constant and limiting c.d.f. for the max-type statistics:
// T - 2 log p + log log p converges to F(y) = exp(-exp(-y/2)/sqrt(pi)).
struct GumbelCalibration {
    explicit GumbelCalibration(Index dimension);

    Index p;
    double centering;  // 2 log p - log log p

    double cdf(double y) const;
    double upper_tail(double statistic) const;  // 1 - F(statistic - centering)
};

double normal_cdf(double x);
double normal_upper_tail(double x);  // 1 - Phi(x), accurate in the far tail

}  // namespace maxsum
