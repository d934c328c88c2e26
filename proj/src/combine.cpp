#include "maxsum/combine.hpp"

#include <algorithm>
#include <cmath>

#include "maxsum/sumtest.hpp"

namespace maxsum {

namespace {
constexpr double k_pi = 3.14159265358979323846;
}

CombinationResult cauchy_combine(const std::vector<double>& pvalues,
                                 std::vector<double> weights) {
    if (pvalues.empty()) throw DomainError("cauchy_combine() needs at least one p-value");
    if (weights.empty()) {
        weights.assign(pvalues.size(), 1.0 / static_cast<double>(pvalues.size()));
    }
    if (weights.size() != pvalues.size()) {
        throw DomainError("weights and p-values differ in length");
    }
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw DomainError("weights must be positive");
        weight_sum += w;
    }

    CombinationResult result;
    result.components.reserve(pvalues.size());
    double t = 0.0;
    for (std::size_t k = 0; k < pvalues.size(); ++k) {
        const double p = pvalues[k];
        if (!(p > 0.0 && p < 1.0)) {
            throw DomainError("component p-value must lie strictly in (0,1)");
        }
        const double w = weights[k] / weight_sum;
        t += w * std::tan((0.5 - p) * k_pi);
        result.components.push_back({"c" + std::to_string(k + 1), p, w});
    }
    result.t_combined = t;
    result.p_combined = std::clamp(0.5 - std::atan(t) / k_pi, 0.0, 1.0);
    return result;
}

CombinationResult minp_combine(double p1, double p2) {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
        throw DomainError("min-p components must lie in [0,1]");
    }
    const double smallest = std::min(p1, p2);
    CombinationResult result;
    result.t_combined = smallest;
    const double survival = 1.0 - smallest;
    result.p_combined = 1.0 - survival * survival;
    result.components = {{"c1", p1, 0.5}, {"c2", p2, 0.5}};
    return result;
}

double tan_safe_pvalue(const TestReport& report) {
    double lo;
    if ((report.calibration == Calibration::Multiplier ||
         report.calibration == Calibration::Permutation) &&
        report.aux.count("B") > 0) {
        lo = 1.0 / (10.0 * report.aux.at("B"));
    } else {
        lo = 1e-300;
    }
    const double hi = std::min(1.0 - lo, std::nextafter(1.0, 0.0));
    return std::clamp(report.pvalue, lo, hi);
}

TestReport combine_reports(Method method, const TestReport& sum_part,
                           const TestReport& max_part) {
    const double p_sum = tan_safe_pvalue(sum_part);
    const double p_max = tan_safe_pvalue(max_part);
    const CombinationResult combined = cauchy_combine({p_sum, p_max});
    std::map<std::string, double> aux{
        {std::string("p_") + to_string(sum_part.method), sum_part.pvalue},
        {std::string("p_") + to_string(max_part.method), max_part.pvalue},
    };
    return make_report(method, combined.t_combined, combined.p_combined,
                       Calibration::Cauchy, std::move(aux));
}

TestReport test_rc1(const Dataset& data, std::uint64_t seed,
                    const MaxOptions& options) {
    const TestReport rs = test_rs(data);
    const TestReport rm1 = test_rm1(data, seed, options);
    return combine_reports(Method::RC1, rs, rm1);
}

TestReport test_rc2(const Dataset& data, const Matrix& omega_hat,
                    std::uint64_t seed, const MaxOptions& options) {
    const TestReport rs = test_rs(data);
    const TestReport rm2 = test_rm2(data, omega_hat, seed, options);
    return combine_reports(Method::RC2, rs, rm2);
}

}  // namespace maxsum
