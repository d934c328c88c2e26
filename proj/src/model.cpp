#include "maxsum/model.hpp"

#include <cmath>

namespace maxsum {

void validate(const Dataset& data) {
    if (data.X.rows() < 2 || data.X.cols() < 1) {
        throw DimensionError("need n >= 2 and p >= 1, got n=" +
                             std::to_string(data.X.rows()) +
                             " p=" + std::to_string(data.X.cols()));
    }
    if (data.y.size() != data.X.rows()) {
        throw LengthMismatch("len(y)=" + std::to_string(data.y.size()) +
                             " does not match n=" + std::to_string(data.X.rows()));
    }
    if (!data.X.allFinite()) throw NonFiniteError("X contains NaN or Inf");
    if (!data.y.allFinite()) throw NonFiniteError("y contains NaN or Inf");
}

const char* to_string(Method method) {
    switch (method) {
        case Method::RS: return "RS";
        case Method::RM1: return "RM1";
        case Method::RM2: return "RM2";
        case Method::RC1: return "RC1";
        case Method::RC2: return "RC2";
        case Method::EB: return "EB";
        case Method::MAX: return "MAX";
        case Method::COM: return "COM";
    }
    return "?";
}

const char* to_string(Calibration calibration) {
    switch (calibration) {
        case Calibration::Normal: return "normal";
        case Calibration::Gumbel: return "gumbel";
        case Calibration::Multiplier: return "multiplier";
        case Calibration::Permutation: return "permutation";
        case Calibration::Cauchy: return "cauchy";
        case Calibration::MinP: return "minp";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    for (Method m : {Method::RS, Method::RM1, Method::RM2, Method::RC1,
                     Method::RC2, Method::EB, Method::MAX, Method::COM}) {
        if (name == to_string(m)) return m;
    }
    throw DomainError("unknown method '" + name + "'");
}

bool calibration_allowed(Method method, Calibration calibration) {
    switch (method) {
        case Method::RS: return calibration == Calibration::Normal;
        case Method::RM1:
        case Method::RM2:
            return calibration == Calibration::Gumbel ||
                   calibration == Calibration::Multiplier;
        case Method::RC1:
        case Method::RC2: return calibration == Calibration::Cauchy;
        case Method::EB: return calibration == Calibration::Permutation;
        case Method::MAX: return calibration == Calibration::Gumbel;
        case Method::COM: return calibration == Calibration::MinP;
    }
    return false;
}

TestReport make_report(Method method, double statistic, double pvalue,
                       Calibration calibration,
                       std::map<std::string, double> aux) {
    if (!(pvalue >= 0.0 && pvalue <= 1.0)) {
        throw DomainError(std::string("p-value out of [0,1] for ") + to_string(method));
    }
    if (!calibration_allowed(method, calibration)) {
        throw DomainError(std::string("calibration '") + to_string(calibration) +
                          "' is not valid for method " + to_string(method));
    }
    return TestReport{method, statistic, pvalue, calibration, std::move(aux)};
}

GumbelCalibration::GumbelCalibration(Index dimension) : p(dimension) {
    if (p < 3) throw DomainError("Gumbel calibration requires p >= 3");
    const double logp = std::log(static_cast<double>(p));
    centering = 2.0 * logp - std::log(logp);
}

double GumbelCalibration::cdf(double y) const {
    constexpr double inv_sqrt_pi = 0.5641895835477562869;
    return std::exp(-inv_sqrt_pi * std::exp(-y / 2.0));
}

double GumbelCalibration::upper_tail(double statistic) const {
    constexpr double inv_sqrt_pi = 0.5641895835477562869;
    const double y = statistic - centering;
    const double rate = inv_sqrt_pi * std::exp(-y / 2.0);  // may overflow to inf
    double pvalue = -std::expm1(-rate);                    // 1 - exp(-rate)
    if (pvalue < 0.0) pvalue = 0.0;
    if (pvalue > 1.0) pvalue = 1.0;
    return pvalue;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_upper_tail(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

}  // namespace maxsum
