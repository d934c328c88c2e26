#include "maxsum/runner.hpp"

#include <cmath>

namespace maxsum {

TestRunner::TestRunner(const Dataset& data, const RunnerOptions& options,
                       std::uint64_t seed, std::uint64_t replicate)
    : data_(data), options_(options), seed_(seed), replicate_(replicate) {
    validate(data_);
    score_ = wilcoxon_scores(data_.y);
}

std::uint64_t TestRunner::method_seed(std::uint64_t tag) const {
    return Rng::derive_key(seed_, replicate_, tag);
}

const Matrix& TestRunner::gram() {
    if (!gram_) gram_ = centered_gram(data_.X);
    return *gram_;
}

const MaxBasis& TestRunner::basis_rm1() {
    if (!basis_rm1_) basis_rm1_ = rm1_basis(data_.X);
    return *basis_rm1_;
}

const BandedPrecision& TestRunner::precision() {
    if (!precision_) {
        if (options_.omega_oracle != nullptr) {
            BandedPrecision oracle;
            oracle.omega_hat = *options_.omega_oracle;
            oracle.band_k = -1;  // not estimated
            precision_ = std::move(oracle);
        } else {
            precision_ = estimate_precision(data_.X, options_.precision,
                                            method_seed(stream_tag::k_precision_cv));
        }
    }
    return *precision_;
}

const MaxBasis& TestRunner::basis_rm2() {
    if (!basis_rm2_) basis_rm2_ = rm2_basis(data_.X, precision().omega_hat);
    return *basis_rm2_;
}

const SumTestInternals& TestRunner::internals_rs() {
    if (!rs_) {
        if (data_.n() < 4) throw DimensionError("RS needs n >= 4");
        rs_ = rs_internals(data_.X, score_, &gram());
    }
    return *rs_;
}

const MaxTestInternals& TestRunner::internals_rm1() {
    if (!rm1_) rm1_ = max_internals(basis_rm1(), score_);
    return *rm1_;
}

const MaxTestInternals& TestRunner::internals_rm2() {
    if (!rm2_) rm2_ = max_internals(basis_rm2(), score_);
    return *rm2_;
}

double TestRunner::statistic_rs() { return internals_rs().t_rs; }
double TestRunner::statistic_rm1() { return internals_rm1().statistic; }
double TestRunner::statistic_rm2() { return internals_rm2().statistic; }

namespace {

TestReport max_type_report(Method method, const MaxBasis& basis,
                           const MaxTestInternals& internals,
                           Calibration calibration, int bootstrap_B,
                           std::uint64_t seed) {
    double pvalue = 0.0;
    std::map<std::string, double> aux;
    if (calibration == Calibration::Multiplier) {
        pvalue = multiplier_pvalue_from_basis(basis.U, internals.statistic,
                                              bootstrap_B, seed);
        aux["B"] = bootstrap_B;
    } else {
        pvalue = gumbel_pvalue(internals.statistic, basis.U.cols());
    }
    return make_report(method, internals.statistic, pvalue, calibration,
                       std::move(aux));
}

}  // namespace

TestReport TestRunner::compute(Method method) {
    switch (method) {
        case Method::RS: {
            const SumTestInternals& internals = internals_rs();
            return make_report(Method::RS, internals.t_rs,
                               normal_upper_tail(internals.t_rs),
                               Calibration::Normal,
                               {{"w_n", internals.w_n},
                                {"trace_hat", internals.trace_hat}});
        }
        case Method::RM1:
            return max_type_report(Method::RM1, basis_rm1(), internals_rm1(),
                                   options_.rm_calibration, options_.bootstrap_B,
                                   method_seed(stream_tag::k_rm1_multiplier));
        case Method::RM2: {
            TestReport out = max_type_report(
                Method::RM2, basis_rm2(), internals_rm2(),
                options_.rm_calibration, options_.bootstrap_B,
                method_seed(stream_tag::k_rm2_multiplier));
            out.aux["band_k"] = precision().band_k;
            out.aux["ridge_tau"] = precision().ridge_tau;
            return out;
        }
        case Method::RC1:
            return combine_reports(Method::RC1, report(Method::RS),
                                   report(Method::RM1));
        case Method::RC2:
            return combine_reports(Method::RC2, report(Method::RS),
                                   report(Method::RM2));
        case Method::EB:
            return test_eb(data_, options_.perm_B,
                           method_seed(stream_tag::k_eb_permutation));
        case Method::MAX:
            return test_max(data_);
        case Method::COM: {
            const CombinationResult combined =
                minp_combine(report(Method::EB).pvalue, report(Method::MAX).pvalue);
            return make_report(Method::COM, combined.t_combined,
                               combined.p_combined, Calibration::MinP,
                               {{"p_EB", report(Method::EB).pvalue},
                                {"p_MAX", report(Method::MAX).pvalue}});
        }
    }
    throw DomainError("unknown method");
}

const TestReport& TestRunner::report(Method method) {
    auto found = reports_.find(method);
    if (found != reports_.end()) return found->second;
    TestReport computed = compute(method);
    return reports_.emplace(method, std::move(computed)).first->second;
}

}  // namespace maxsum
