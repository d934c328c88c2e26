#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxsum/combine.hpp"
#include "maxsum/rng.hpp"
#include "maxsum/sumtest.hpp"

using namespace maxsum;

namespace {

double ks_distance_to_uniform(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double distance = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double upper = (i + 1.0) / n - values[i];
        const double lower = values[i] - i / n;
        distance = std::max({distance, upper, lower});
    }
    return distance;
}

Dataset random_dataset(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.X.resize(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) data.X(i, j) = rng.normal();
    data.y.resize(n);
    for (Index i = 0; i < n; ++i) data.y[i] = rng.normal();
    return data;
}

}  // namespace

TEST_SUITE("combine") {

TEST_CASE("cauchy combination on symmetric inputs") {
    const CombinationResult both_half = cauchy_combine({0.5, 0.5});
    CHECK(both_half.t_combined == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(both_half.p_combined == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(both_half.components.size() == 2);
    CHECK(both_half.components[0].weight == doctest::Approx(0.5));
    CHECK(both_half.components[1].weight == doctest::Approx(0.5));
}

TEST_CASE("idempotence on equal p-values") {
    for (double q : {0.01, 0.1, 0.37, 0.5, 0.73, 0.99}) {
        const CombinationResult result = cauchy_combine({q, q});
        CHECK(result.p_combined == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("frozen evaluation of the (0.05, 0.5) pair") {
    const CombinationResult result = cauchy_combine({0.05, 0.5});
    CHECK(result.t_combined == doctest::Approx(3.1568757573375206).epsilon(1e-12));
    CHECK(result.p_combined == doctest::Approx(0.09764767391504592).epsilon(1e-12));
}

TEST_CASE("combined p-value equals the arctan back-transform") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const double p1 = rng.uniform01() * 0.999 + 0.0005;
        const double p2 = rng.uniform01() * 0.999 + 0.0005;
        const CombinationResult result = cauchy_combine({p1, p2});
        CHECK(result.p_combined ==
              doctest::Approx(0.5 - std::atan(result.t_combined) / M_PI)
                  .epsilon(1e-12));
    }
}

TEST_CASE("domain violations") {
    CHECK_THROWS_AS(cauchy_combine({0.0, 0.5}), DomainError);
    CHECK_THROWS_AS(cauchy_combine({1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(cauchy_combine({}), DomainError);
    CHECK_THROWS_AS(cauchy_combine({0.5, 0.5}, {1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(cauchy_combine({0.5}, {0.5, 0.5}), DomainError);
}

TEST_CASE("weights are normalized") {
    const CombinationResult scaled = cauchy_combine({0.2, 0.7}, {3.0, 3.0});
    const CombinationResult equal = cauchy_combine({0.2, 0.7});
    CHECK(scaled.t_combined == doctest::Approx(equal.t_combined).epsilon(1e-14));
    // weights sum to one after normalization
    double total = 0.0;
    for (const auto& component : scaled.components) total += component.weight;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("min-p combination values and boundaries") {
    CHECK(minp_combine(0.5, 0.9).p_combined == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(minp_combine(0.0, 0.7).p_combined == 0.0);
    CHECK(minp_combine(1.0, 1.0).p_combined == 1.0);
    CHECK(minp_combine(0.5, 0.5).p_combined == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(minp_combine(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(minp_combine(0.5, 1.1), DomainError);
}

TEST_CASE("monotonicity: smaller component p-values shrink the combination") {
    const double base = cauchy_combine({0.3, 0.6}).p_combined;
    CHECK(cauchy_combine({0.2, 0.6}).p_combined < base);
    CHECK(cauchy_combine({0.3, 0.5}).p_combined < base);
}

TEST_CASE("rejection rules agree: p < alpha iff T > tan((1/2 - alpha) pi)") {
    Rng rng(2);
    for (double alpha : {0.01, 0.05, 0.1}) {
        const double threshold = std::tan((0.5 - alpha) * M_PI);
        for (int trial = 0; trial < 200; ++trial) {
            const double p1 = rng.uniform01() * 0.998 + 0.001;
            const double p2 = rng.uniform01() * 0.998 + 0.001;
            const CombinationResult result = cauchy_combine({p1, p2});
            CHECK((result.p_combined < alpha) == (result.t_combined > threshold));
        }
    }
}

TEST_CASE("null validity: combined uniforms stay uniform") {
    Rng rng(3);
    std::vector<double> combined;
    combined.reserve(5000);
    for (int draw = 0; draw < 5000; ++draw) {
        const double p1 = rng.uniform01();
        const double p2 = rng.uniform01();
        combined.push_back(cauchy_combine({p1, p2}).p_combined);
    }
    CHECK(ks_distance_to_uniform(std::move(combined)) < 0.03);
}

TEST_CASE("tan-safe clamping for resampling-granular p-values") {
    TestReport bootstrap_one = make_report(Method::RM1, 1.0, 1.0,
                                           Calibration::Multiplier,
                                           {{"B", 2000.0}});
    const double clamped = tan_safe_pvalue(bootstrap_one);
    CHECK(clamped == doctest::Approx(1.0 - 1.0 / 20000.0).epsilon(1e-12));
    // stays finite through the combination
    CHECK(std::isfinite(std::tan((0.5 - clamped) * M_PI)));

    TestReport exact_zero =
        make_report(Method::RS, 50.0, 0.0, Calibration::Normal);
    const double lifted = tan_safe_pvalue(exact_zero);
    CHECK(lifted > 0.0);
    CHECK(std::isfinite(std::tan((0.5 - lifted) * M_PI)));
}

TEST_CASE("combine_reports wires components into the Cauchy rule") {
    const TestReport rs = make_report(Method::RS, 0.0, 0.5, Calibration::Normal);
    const TestReport rm1 = make_report(Method::RM1, 8.0, 0.5,
                                       Calibration::Multiplier, {{"B", 2000.0}});
    const TestReport rc1 = combine_reports(Method::RC1, rs, rm1);
    CHECK(rc1.method == Method::RC1);
    CHECK(rc1.calibration == Calibration::Cauchy);
    CHECK(rc1.pvalue == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rc1.aux.at("p_RS") == 0.5);
    CHECK(rc1.aux.at("p_RM1") == 0.5);
}

TEST_CASE("test_rc1 reproduces its standalone components") {
    const Dataset data = random_dataset(20, 6, 4);
    MaxOptions options;
    options.bootstrap_B = 200;
    const TestReport rc1 = test_rc1(data, 11, options);
    const TestReport rs = test_rs(data);
    const TestReport rm1 = test_rm1(data, 11, options);
    CHECK(rc1.aux.at("p_RS") == rs.pvalue);
    CHECK(rc1.aux.at("p_RM1") == rm1.pvalue);
    const CombinationResult expected =
        cauchy_combine({tan_safe_pvalue(rs), tan_safe_pvalue(rm1)});
    CHECK(rc1.pvalue == doctest::Approx(expected.p_combined).epsilon(1e-14));
    CHECK(rc1.statistic == doctest::Approx(expected.t_combined).epsilon(1e-14));
}

TEST_CASE("test_rc2 runs end to end with an identity precision") {
    const Dataset data = random_dataset(16, 4, 5);
    MaxOptions options;
    options.bootstrap_B = 150;
    const TestReport rc2 =
        test_rc2(data, Matrix::Identity(4, 4), 13, options);
    CHECK(rc2.method == Method::RC2);
    CHECK(rc2.pvalue > 0.0);
    CHECK(rc2.pvalue < 1.0);
}

}  // TEST_SUITE
