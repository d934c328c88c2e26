// Acceptance suite: one criterion per command-line id (1..11), each printing
// a single PASS/FAIL line plus supporting detail. With no arguments every
// criterion runs. Exit code 0 iff everything requested passed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "maxsum/combine.hpp"
#include "maxsum/dgp.hpp"
#include "maxsum/io.hpp"
#include "maxsum/maxtest.hpp"
#include "maxsum/mc.hpp"
#include "maxsum/precision.hpp"
#include "maxsum/ranks.hpp"
#include "maxsum/rng.hpp"
#include "maxsum/runner.hpp"
#include "maxsum/sumtest.hpp"

using namespace maxsum;

namespace {

constexpr double k_size_tolerance_pp = 2.5;  // percentage points around Table 1

const std::vector<Method> k_all_methods = {
    Method::MAX, Method::EB, Method::COM, Method::RS,
    Method::RM1, Method::RM2, Method::RC1, Method::RC2};

struct SizeCell {
    Index n;
    Index p;
    ErrorKind error;
    std::uint64_t seed;
    // reference empirical sizes in percent, keyed like k_all_methods
    std::map<Method, double> reference;
};

const std::vector<SizeCell> k_table1_primary = {
    {100, 200, ErrorKind::E1_Normal, 461001,
     {{Method::MAX, 3.3}, {Method::EB, 5.0}, {Method::COM, 3.1}, {Method::RS, 5.8},
      {Method::RM1, 4.5}, {Method::RM2, 4.1}, {Method::RC1, 6.1}, {Method::RC2, 5.8}}},
    {100, 200, ErrorKind::E2_StudentT3, 461002,
     {{Method::MAX, 2.4}, {Method::EB, 3.8}, {Method::COM, 2.9}, {Method::RS, 5.8},
      {Method::RM1, 3.7}, {Method::RM2, 6.1}, {Method::RC1, 5.2}, {Method::RC2, 6.2}}},
    {100, 200, ErrorKind::E3_LogNormal, 461003,
     {{Method::MAX, 3.1}, {Method::EB, 6.6}, {Method::COM, 4.3}, {Method::RS, 5.8},
      {Method::RM1, 4.3}, {Method::RM2, 4.2}, {Method::RC1, 6.1}, {Method::RC2, 5.8}}},
    {100, 200, ErrorKind::E4_Mixture, 461004,
     {{Method::MAX, 3.4}, {Method::EB, 4.7}, {Method::COM, 3.7}, {Method::RS, 6.6},
      {Method::RM1, 4.4}, {Method::RM2, 4.9}, {Method::RC1, 6.5}, {Method::RC2, 6.2}}},
};

const std::vector<SizeCell> k_table1_extended = {
    {100, 400, ErrorKind::E1_Normal, 461005,
     {{Method::MAX, 2.7}, {Method::EB, 4.5}, {Method::COM, 2.9}, {Method::RS, 5.4},
      {Method::RM1, 3.8}, {Method::RM2, 5.8}, {Method::RC1, 5.2}, {Method::RC2, 5.9}}},
    {200, 200, ErrorKind::E1_Normal, 461006,
     {{Method::MAX, 2.1}, {Method::EB, 5.6}, {Method::COM, 4.1}, {Method::RS, 7.0},
      {Method::RM1, 3.6}, {Method::RM2, 5.3}, {Method::RC1, 6.7}, {Method::RC2, 6.0}}},
    {200, 400, ErrorKind::E1_Normal, 461007,
     {{Method::MAX, 2.8}, {Method::EB, 4.6}, {Method::COM, 4.3}, {Method::RS, 6.3},
      {Method::RM1, 4.3}, {Method::RM2, 4.7}, {Method::RC1, 5.9}, {Method::RC2, 6.3}}},
};

bool check_size_cell(const SizeCell& cell) {
    ExperimentConfig config;
    config.n = cell.n;
    config.p = cell.p;
    config.cov = {CovarianceSpec::Kind::AR1, 0.7, cell.p};
    config.error = {cell.error};
    config.methods = k_all_methods;
    config.replications = 1000;
    config.alpha = 0.05;
    config.seed = cell.seed;
    config.bootstrap_B = 2000;
    config.perm_B = 500;
    config.workers = 0;

    const SizeTable table = run_size(config);
    bool pass = true;
    std::printf("  cell n=%ld p=%ld %s:", static_cast<long>(cell.n),
                static_cast<long>(cell.p), to_string(cell.error));
    for (const MethodCell& method_cell : table.cells) {
        const double observed = 100.0 * method_cell.frequency();
        const double expected = cell.reference.at(method_cell.method);
        const bool ok = std::abs(observed - expected) <= k_size_tolerance_pp;
        pass = pass && ok;
        std::printf(" %s %.1f(ref %.1f)%s", to_string(method_cell.method), observed,
                    expected, ok ? "" : "<-OUT");
    }
    std::printf("\n");
    return pass;
}

bool criterion_01() {
    bool pass = true;
    for (const SizeCell& cell : k_table1_primary) pass = check_size_cell(cell) && pass;
    return pass;
}

bool criterion_02() {
    bool pass = true;
    for (const SizeCell& cell : k_table1_extended) pass = check_size_cell(cell) && pass;
    return pass;
}

bool criterion_03() {
    Rng meta(777001);
    double worst = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        const Index n = 4 + static_cast<Index>(meta.below(7));   // 4..10
        const Index p = 1 + static_cast<Index>(meta.below(5));   // 1..5
        Matrix x(n, p);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < p; ++j) x(i, j) = meta.normal();
        const double fast = trace_sigma2_hat(x);
        const double slow = trace_sigma2_bruteforce(x);
        const double scale = std::max({std::abs(fast), std::abs(slow), 1e-300});
        worst = std::max(worst, std::abs(fast - slow) / scale);
    }
    std::printf("  worst relative deviation over 100 instances: %.3g (tol 1e-10)\n",
                worst);
    return worst <= 1e-10;
}

bool criterion_04() {
    const Index p = 50;
    const Index n = 60;
    const CovarianceModel cov = make_covariance({CovarianceSpec::Kind::AR1, 0.7, p});
    const double exact = cov.sigma.squaredNorm();  // tr(Sigma^2)
    double mean = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        Rng rng = Rng::substream(777004, static_cast<std::uint64_t>(rep));
        Matrix z(n, p);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();
        const Matrix x = z * cov.chol.transpose();
        mean += trace_sigma2_hat(x);
    }
    mean /= 500.0;
    const double relative = std::abs(mean - exact) / exact;
    std::printf("  mean estimate %.2f vs exact %.2f (relative %.3f, tol 0.10)\n",
                mean, exact, relative);
    return relative <= 0.10;
}

ExperimentConfig diag_config(std::uint64_t seed) {
    ExperimentConfig config;
    config.n = 200;
    config.p = 400;
    config.cov = {CovarianceSpec::Kind::AR1, 0.7, 400};
    config.error = {ErrorKind::E1_Normal};
    config.methods = {Method::RS};
    config.replications = 2000;
    config.alpha = 0.05;
    config.seed = seed;
    config.workers = 0;
    return config;
}

bool criterion_05() {
    const IndependenceDiag diag =
        run_independence_diag(diag_config(777005), MaxVariant::RM1);
    const double rejection = 100.0 * diag.sum_rejection_rate;
    const bool size_ok = rejection >= 3.5 && rejection <= 7.5;
    const bool corr_ok = std::abs(diag.correlation) < 0.10;
    const double joint = 100.0 * diag.joint_upper_upper;
    const bool joint_ok = joint >= -1.0 && joint <= 3.0;  // 1% +- 2pp
    std::printf("  T_RS 5%% rejection %.2f%% in [3.5,7.5]: %s\n", rejection,
                size_ok ? "yes" : "NO");
    std::printf("  |corr(T_RS, centered T_RM1)| = %.4f < 0.10: %s\n",
                std::abs(diag.correlation), corr_ok ? "yes" : "NO");
    std::printf("  joint 10%%x10%% tail frequency %.2f%% within 1%%+-2pp: %s\n",
                joint, joint_ok ? "yes" : "NO");
    return size_ok && corr_ok && joint_ok;
}

bool criterion_06() {
    const IndependenceDiag diag =
        run_independence_diag(diag_config(777006), MaxVariant::RM2);
    const bool corr_ok = std::abs(diag.correlation) < 0.10;
    std::printf("  |corr(T_RS, centered T_RM2)| = %.4f < 0.10: %s\n",
                std::abs(diag.correlation), corr_ok ? "yes" : "NO");
    return corr_ok;
}

bool criterion_07() {
    Rng rng(777007);
    std::vector<double> combined;
    combined.reserve(5000);
    for (int draw = 0; draw < 5000; ++draw) {
        const double p1 = rng.uniform01();
        const double p2 = rng.uniform01();
        combined.push_back(cauchy_combine({p1, p2}).p_combined);
    }
    std::sort(combined.begin(), combined.end());
    double distance = 0.0;
    const double count = static_cast<double>(combined.size());
    for (std::size_t i = 0; i < combined.size(); ++i) {
        distance = std::max(distance, (i + 1.0) / count - combined[i]);
        distance = std::max(distance, combined[i] - i / count);
    }
    bool idempotent = true;
    for (double q : {0.01, 0.5, 0.99}) {
        idempotent =
            idempotent && std::abs(cauchy_combine({q, q}).p_combined - q) <= 1e-12;
    }
    std::printf("  KS distance to Uniform(0,1): %.4f (tol 0.03); idempotence: %s\n",
                distance, idempotent ? "exact to 1e-12" : "VIOLATED");
    return distance < 0.03 && idempotent;
}

std::map<Method, std::map<int, double>> power_by_method(const PowerCurve& curve) {
    std::map<Method, std::map<int, double>> out;
    for (const PowerPoint& point : curve.points) {
        for (const MethodCell& cell : point.cells) {
            out[cell.method][point.signal_count] = 100.0 * cell.frequency();
        }
    }
    return out;
}

bool criterion_08() {
    ExperimentConfig config;
    config.n = 100;
    config.p = 200;
    config.cov = {CovarianceSpec::Kind::AR1, 0.7, 200};
    config.error = {ErrorKind::E2_StudentT3};
    config.methods = {Method::RS, Method::RM1, Method::RC1};
    config.replications = 500;
    config.alpha = 0.05;
    config.seed = 777008;
    config.bootstrap_B = 2000;
    config.workers = 0;
    config.signal.design = SignalDesign::DenseRandom;
    config.signal.norm_target = 0.8;

    const std::vector<int> grid = {1, 5, 10, 20, 50};
    const PowerCurve curve = run_power(config, grid);
    const auto power = power_by_method(curve);

    std::printf("  s:    ");
    for (int s : grid) std::printf(" %6d", s);
    std::printf("\n");
    for (Method m : config.methods) {
        std::printf("  %-4s:", to_string(m));
        for (int s : grid) std::printf(" %6.1f", power.at(m).at(s));
        std::printf("\n");
    }

    const bool sparse_edge = power.at(Method::RM1).at(1) > power.at(Method::RS).at(1);
    const bool dense_edge = power.at(Method::RS).at(50) > power.at(Method::RM1).at(50);
    bool adaptive = true;
    for (int s : grid) {
        const double best =
            std::max(power.at(Method::RS).at(s), power.at(Method::RM1).at(s));
        adaptive = adaptive && power.at(Method::RC1).at(s) >= best - 10.0;
    }
    std::printf("  RM1>RS at s=1: %s; RS>RM1 at s=50: %s; RC1 >= max-10pp: %s\n",
                sparse_edge ? "yes" : "NO", dense_edge ? "yes" : "NO",
                adaptive ? "yes" : "NO");
    return sparse_edge && dense_edge && adaptive;
}

bool criterion_09() {
    ExperimentConfig config;
    config.n = 100;
    config.p = 200;
    config.cov = {CovarianceSpec::Kind::AR1, 0.5, 200};
    config.error = {ErrorKind::E1_Normal};
    config.methods = {Method::RM1, Method::RM2, Method::RC1, Method::RC2};
    config.replications = 500;
    config.alpha = 0.05;
    config.seed = 812001;
    config.bootstrap_B = 2000;
    config.workers = 0;
    config.signal.design = SignalDesign::ThetaPattern;

    const std::vector<int> grid = {2, 6, 10};
    const PowerCurve curve = run_power(config, grid);
    const auto power = power_by_method(curve);

    std::printf("  m:    ");
    for (int m : grid) std::printf(" %6d", m);
    std::printf("\n");
    for (Method m : config.methods) {
        std::printf("  %-4s:", to_string(m));
        for (int g : grid) std::printf(" %6.1f", power.at(m).at(g));
        std::printf("\n");
    }

    bool rm2_dominates = true;
    bool rc2_close = true;
    for (int m : grid) {
        rm2_dominates =
            rm2_dominates && power.at(Method::RM2).at(m) >= power.at(Method::RM1).at(m);
        rc2_close =
            rc2_close && power.at(Method::RC2).at(m) >= power.at(Method::RC1).at(m) - 5.0;
    }
    std::printf("  RM2 >= RM1 at every m: %s; RC2 >= RC1-5pp: %s\n",
                rm2_dominates ? "yes" : "NO", rc2_close ? "yes" : "NO");
    return rm2_dominates && rc2_close;
}

bool criterion_10() {
    ExperimentConfig config;
    config.n = 50;
    config.p = 30;
    config.cov = {CovarianceSpec::Kind::AR1, 0.7, 30};
    config.error = {ErrorKind::E2_StudentT3};
    config.methods = k_all_methods;
    config.replications = 60;
    config.alpha = 0.05;
    config.seed = 777010;
    config.bootstrap_B = 200;
    config.perm_B = 150;

    config.workers = 1;
    const std::string serial = io::size_table_jsonl(run_size(config));
    config.workers = 8;
    const std::string wide = io::size_table_jsonl(run_size(config));
    config.workers = 8;
    const std::string again = io::size_table_jsonl(run_size(config));

    const bool identical = serial == wide && wide == again;
    std::printf("  workers {1,8,8}: size tables byte-identical: %s\n",
                identical ? "yes" : "NO");

    config.signal.design = SignalDesign::DenseRandom;
    config.workers = 1;
    const std::string power_serial = io::power_curve_jsonl(run_power(config, {2, 5}));
    config.workers = 8;
    const std::string power_wide = io::power_curve_jsonl(run_power(config, {2, 5}));
    const bool power_identical = power_serial == power_wide;
    std::printf("  power campaign workers {1,8}: byte-identical: %s\n",
                power_identical ? "yes" : "NO");
    return identical && power_identical;
}

bool criterion_11() {
    bool pass = true;

    // fixed random instance
    Rng rng(777011);
    const Index n = 25;
    const Index p = 12;
    Dataset data;
    data.X.resize(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) data.X(i, j) = rng.normal();
    data.y.resize(n);
    for (Index i = 0; i < n; ++i) data.y[i] = rng.normal();

    // score monotone invariance, exact
    const ScoreVector base_scores = wilcoxon_scores(data.y);
    const bool scores_exp =
        wilcoxon_scores(data.y.array().exp().matrix()).e == base_scores.e;
    const bool scores_affine =
        wilcoxon_scores(3.0 * data.y + Vector::Constant(n, -1.0)).e == base_scores.e;
    std::printf("  score invariance under exp / positive affine: %s / %s\n",
                scores_exp ? "exact" : "VIOLATED", scores_affine ? "exact" : "VIOLATED");
    pass = pass && scores_exp && scores_affine;

    // statistic invariance under an increasing transform of y
    Dataset warped = data;
    warped.y = data.y.array().exp().matrix();
    const double t_rs = rs_internals(data.X, base_scores).t_rs;
    const double t_rs_warped =
        rs_internals(warped.X, wilcoxon_scores(warped.y)).t_rs;
    const Vector coords = marginal_coords(data.X, base_scores);
    const Vector coords_warped =
        marginal_coords(warped.X, wilcoxon_scores(warped.y));
    const double t_rm1 = coords.cwiseAbs().maxCoeff();
    const double t_rm1_warped = coords_warped.cwiseAbs().maxCoeff();
    const bool stats_invariant = t_rs == t_rs_warped && t_rm1 == t_rm1_warped;
    std::printf("  T_RS / T_RM1 invariance under increasing y transform: %s\n",
                stats_invariant ? "exact" : "VIOLATED");
    pass = pass && stats_invariant;

    // trace estimator: location shift and row permutation
    Matrix shifted = data.X;
    shifted.rowwise() += Eigen::RowVectorXd::LinSpaced(p, -30.0, 45.0);
    const double trace_base = trace_sigma2_hat(data.X);
    const double shift_err =
        std::abs(trace_sigma2_hat(shifted) - trace_base) / trace_base;
    Matrix permuted(n, p);
    for (Index i = 0; i < n; ++i) permuted.row(i) = data.X.row((i * 7 + 3) % n);
    const double perm_err =
        std::abs(trace_sigma2_hat(permuted) - trace_base) / trace_base;
    std::printf("  trace location/permutation invariance: rel err %.2e / %.2e "
                "(tol 1e-10)\n", shift_err, perm_err);
    pass = pass && shift_err <= 1e-10 && perm_err <= 1e-10;

    // band idempotence, exact
    Matrix s(6, 6);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j) s(i, j) = rng.normal();
    bool idempotent = true;
    for (int k = 0; k <= 5; ++k) {
        idempotent = idempotent && band(band(s, k), k) == band(s, k);
    }
    std::printf("  band idempotence over k=0..5: %s\n",
                idempotent ? "exact" : "VIOLATED");
    pass = pass && idempotent;

    return pass;
}

struct CriterionEntry {
    int id;
    const char* title;
    bool (*run)();
};

const CriterionEntry k_criteria[] = {
    {1, "Table 1 size reproduction, (100,200) x E1..E4, +-2.5pp", criterion_01},
    {2, "Extended size grid, E1 x {(100,400),(200,200),(200,400)}, +-2.5pp",
     criterion_02},
    {3, "Trace-estimator oracle equivalence (100 random instances, 1e-10)",
     criterion_03},
    {4, "Trace-estimator consistency, AR(1) 0.7, p=50, n=60 (10%)", criterion_04},
    {5, "Joint-limit diagnostics for T_RS and T_RM1 (size, corr, joint tail)",
     criterion_05},
    {6, "Joint-limit diagnostic for T_RM2 with estimated precision", criterion_06},
    {7, "Cauchy-rule null validity (KS < 0.03) and idempotence (1e-12)",
     criterion_07},
    {8, "Power pattern, design 1, E2: sparse/dense edges and RC1 adaptivity",
     criterion_08},
    {9, "Power pattern, design 2, rho=0.5: RM2 dominance and RC2 proximity",
     criterion_09},
    {10, "Determinism and parallel invariance (byte-identical tables)",
     criterion_10},
    {11, "Invariance suite (scores, statistics, trace, banding)", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> requested;
    for (int a = 1; a < argc; ++a) requested.push_back(std::atoi(argv[a]));
    if (requested.empty()) {
        for (const CriterionEntry& entry : k_criteria) requested.push_back(entry.id);
    }

    bool all_pass = true;
    for (int id : requested) {
        const CriterionEntry* found = nullptr;
        for (const CriterionEntry& entry : k_criteria) {
            if (entry.id == id) found = &entry;
        }
        if (found == nullptr) {
            std::fprintf(stderr, "unknown criterion id %d\n", id);
            return 2;
        }
        std::printf("criterion %02d: %s\n", found->id, found->title);
        std::fflush(stdout);
        const bool pass = found->run();
        std::printf("criterion %02d [%s]\n", found->id, pass ? "PASS" : "FAIL");
        std::fflush(stdout);
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}
