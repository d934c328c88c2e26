#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maxsum/baselines.hpp"
#include "maxsum/combine.hpp"
#include "maxsum/dgp.hpp"
#include "maxsum/io.hpp"
#include "maxsum/maxtest.hpp"
#include "maxsum/mc.hpp"
#include "maxsum/model.hpp"
#include "maxsum/precision.hpp"
#include "maxsum/ranks.hpp"
#include "maxsum/rng.hpp"
#include "maxsum/runner.hpp"
#include "maxsum/sumtest.hpp"
#include "maxsum/version.hpp"

namespace py = pybind11;
using namespace maxsum;

namespace {

py::dict report_to_dict(const TestReport& report) {
    py::dict out;
    out["method"] = to_string(report.method);
    out["statistic"] = report.statistic;
    out["pvalue"] = report.pvalue;
    out["calibration"] = to_string(report.calibration);
    py::dict aux;
    for (const auto& [key, value] : report.aux) aux[py::str(key)] = value;
    out["aux"] = aux;
    return out;
}

Dataset make_dataset(const Matrix& X, const Vector& y) {
    Dataset data{X, y};
    validate(data);
    return data;
}

ErrorSpec error_spec(const std::string& name) {
    return ErrorSpec{error_kind_from_string(name)};
}

std::vector<Method> parse_method_list(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    methods.reserve(names.size());
    for (const std::string& name : names) methods.push_back(method_from_string(name));
    return methods;
}

ExperimentConfig build_config(Index n, Index p, double rho, const std::string& error,
                              const std::vector<std::string>& methods,
                              long replications, double alpha, std::uint64_t seed,
                              int bootstrap_B, int perm_B, int workers) {
    ExperimentConfig config;
    config.n = n;
    config.p = p;
    config.cov = {CovarianceSpec::Kind::AR1, rho, p};
    config.error = error_spec(error);
    config.methods = parse_method_list(methods);
    config.replications = replications;
    config.alpha = alpha;
    config.seed = seed;
    config.bootstrap_B = bootstrap_B;
    config.perm_B = perm_B;
    config.workers = workers;
    return config;
}

py::list cells_to_list(const std::vector<MethodCell>& cells) {
    py::list rows;
    for (const MethodCell& cell : cells) {
        py::dict row;
        row["method"] = to_string(cell.method);
        row["rejections"] = cell.rejections;
        row["replications"] = cell.replications;
        row["frequency"] = cell.frequency();
        row["std_error"] = cell.std_error();
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rank-based max-sum tests for high-dimensional linear regression";
    m.attr("__version__") = k_version;

    py::register_exception<Error>(m, "MaxsumError", PyExc_ValueError);

    // ranks
    m.def("rank", &rank, py::arg("y"), "Midranks of y (ties averaged)");
    m.def(
        "wilcoxon_scores",
        [](const Vector& y) { return wilcoxon_scores(y).e; }, py::arg("y"),
        "Wilcoxon scores sqrt(12) (R_i/(n+1) - 1/2)");

    // sum-type test
    m.def(
        "rank_sum_ustat",
        [](const Matrix& X, const Vector& y) {
            return rank_sum_ustat(X, wilcoxon_scores(y));
        },
        py::arg("X"), py::arg("y"));
    m.def("trace_sigma2_hat", &trace_sigma2_hat, py::arg("X"));
    m.def("trace_sigma2_bruteforce", &trace_sigma2_bruteforce, py::arg("X"));

    // max-type pieces
    m.def(
        "marginal_coords",
        [](const Matrix& X, const Vector& y) {
            return marginal_coords(X, wilcoxon_scores(y));
        },
        py::arg("X"), py::arg("y"));
    m.def(
        "precision_coords",
        [](const Matrix& X, const Vector& y, const Matrix& omega) {
            return precision_coords(X, wilcoxon_scores(y), omega);
        },
        py::arg("X"), py::arg("y"), py::arg("omega_hat"));
    m.def("gumbel_pvalue", &gumbel_pvalue, py::arg("statistic"), py::arg("p"));
    m.def(
        "multiplier_pvalue",
        [](const Matrix& X, const std::string& variant, double observed, int B,
           std::uint64_t seed, std::optional<Matrix> omega) {
            const MaxVariant v =
                variant == "RM2" ? MaxVariant::RM2 : MaxVariant::RM1;
            return multiplier_pvalue(X, v, observed, B, seed,
                                     omega ? &*omega : nullptr);
        },
        py::arg("X"), py::arg("variant"), py::arg("observed"), py::arg("B"),
        py::arg("seed"), py::arg("omega_hat") = std::nullopt);

    // precision estimation
    m.def("band", &band, py::arg("S"), py::arg("k"));
    m.def("sample_covariance", &sample_covariance, py::arg("X"));
    m.def("cv_band_select", &cv_band_select, py::arg("X"), py::arg("splits"),
          py::arg("kmax"), py::arg("seed"));
    m.def(
        "estimate_precision",
        [](const Matrix& X, int splits, int kmax, std::uint64_t seed) {
            PrecisionOptions options;
            options.splits = splits;
            options.kmax = kmax;
            const BandedPrecision estimate = estimate_precision(X, options, seed);
            py::dict out;
            out["omega_hat"] = estimate.omega_hat;
            out["band_k"] = estimate.band_k;
            out["ridge_tau"] = estimate.ridge_tau;
            return out;
        },
        py::arg("X"), py::arg("splits") = 50, py::arg("kmax") = 20,
        py::arg("seed") = 0);

    // combination rules
    m.def(
        "cauchy_combine",
        [](const std::vector<double>& pvalues, std::vector<double> weights) {
            const CombinationResult result =
                cauchy_combine(pvalues, std::move(weights));
            py::dict out;
            out["t_combined"] = result.t_combined;
            out["p_combined"] = result.p_combined;
            return out;
        },
        py::arg("pvalues"), py::arg("weights") = std::vector<double>{});
    m.def(
        "minp_combine",
        [](double p1, double p2) {
            const CombinationResult result = minp_combine(p1, p2);
            py::dict out;
            out["t_combined"] = result.t_combined;
            out["p_combined"] = result.p_combined;
            return out;
        },
        py::arg("p1"), py::arg("p2"));

    // data generation
    m.def(
        "covariance_matrix",
        [](double rho, Index p) {
            return covariance_matrix({CovarianceSpec::Kind::AR1, rho, p});
        },
        py::arg("rho"), py::arg("p"));
    m.def(
        "sample_errors",
        [](const std::string& kind, Index n, std::uint64_t seed) {
            Rng rng(seed);
            return sample_errors(error_spec(kind), n, rng);
        },
        py::arg("kind"), py::arg("n"), py::arg("seed"));
    m.def(
        "make_beta_design1",
        [](Index p, int s, int q, std::uint64_t seed, double norm_target) {
            Rng rng(seed);
            return make_beta_design1(p, s, q, rng, norm_target);
        },
        py::arg("p"), py::arg("s"), py::arg("q"), py::arg("seed"),
        py::arg("norm_target") = 0.8);
    m.def("make_beta_design2", &make_beta_design2, py::arg("p"), py::arg("m"),
          py::arg("n"), py::arg("sigma"));
    m.def(
        "generate",
        [](Index n, double rho, Index p, const Vector& beta,
           const std::string& error, std::uint64_t seed) {
            const CovarianceModel cov =
                make_covariance({CovarianceSpec::Kind::AR1, rho, p});
            Rng rng(seed);
            const Dataset data = generate(n, cov, beta, error_spec(error), rng);
            return py::make_tuple(data.X, data.y);
        },
        py::arg("n"), py::arg("rho"), py::arg("p"), py::arg("beta"),
        py::arg("error"), py::arg("seed"));

    // single-dataset tests
    m.def(
        "run_tests",
        [](const Matrix& X, const Vector& y, const std::vector<std::string>& methods,
           std::uint64_t seed, int bootstrap_B, int perm_B, int cv_splits,
           int cv_kmax) {
            const Dataset data = make_dataset(X, y);
            RunnerOptions options;
            options.bootstrap_B = bootstrap_B;
            options.perm_B = perm_B;
            options.precision.splits = cv_splits;
            options.precision.kmax = cv_kmax;
            TestRunner runner(data, options, seed, 0);
            py::list reports;
            for (const std::string& name : methods) {
                reports.append(report_to_dict(runner.report(method_from_string(name))));
            }
            return reports;
        },
        py::arg("X"), py::arg("y"),
        py::arg("methods") =
            std::vector<std::string>{"RS", "RM1", "RM2", "RC1", "RC2", "EB",
                                     "MAX", "COM"},
        py::arg("seed") = 0, py::arg("bootstrap_B") = 2000,
        py::arg("perm_B") = 2000, py::arg("cv_splits") = 50,
        py::arg("cv_kmax") = 20);

    m.def(
        "test_rs",
        [](const Matrix& X, const Vector& y) {
            return report_to_dict(test_rs(make_dataset(X, y)));
        },
        py::arg("X"), py::arg("y"));

    // campaigns
    m.def(
        "run_size",
        [](Index n, Index p, double rho, const std::string& error,
           const std::vector<std::string>& methods, long replications, double alpha,
           std::uint64_t seed, int bootstrap_B, int perm_B, int workers) {
            const SizeTable table = run_size(
                build_config(n, p, rho, error, methods, replications, alpha, seed,
                             bootstrap_B, perm_B, workers));
            return cells_to_list(table.cells);
        },
        py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("error"),
        py::arg("methods"), py::arg("replications"), py::arg("alpha") = 0.05,
        py::arg("seed") = 0, py::arg("bootstrap_B") = 2000, py::arg("perm_B") = 500,
        py::arg("workers") = 0);

    m.def(
        "run_power",
        [](Index n, Index p, double rho, const std::string& error,
           const std::vector<std::string>& methods, long replications,
           const std::string& design, const std::vector<int>& grid, double alpha,
           std::uint64_t seed, int bootstrap_B, int perm_B, int workers,
           double norm_target) {
            ExperimentConfig config =
                build_config(n, p, rho, error, methods, replications, alpha, seed,
                             bootstrap_B, perm_B, workers);
            if (design == "dense_random") {
                config.signal.design = SignalDesign::DenseRandom;
            } else if (design == "theta_pattern") {
                config.signal.design = SignalDesign::ThetaPattern;
            } else {
                throw DomainError("design must be dense_random or theta_pattern");
            }
            config.signal.norm_target = norm_target;
            const PowerCurve curve = run_power(config, grid);
            py::list points;
            for (const PowerPoint& point : curve.points) {
                py::dict entry;
                entry["signal_count"] = point.signal_count;
                entry["cells"] = cells_to_list(point.cells);
                points.append(entry);
            }
            return points;
        },
        py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("error"),
        py::arg("methods"), py::arg("replications"), py::arg("design"),
        py::arg("grid"), py::arg("alpha") = 0.05, py::arg("seed") = 0,
        py::arg("bootstrap_B") = 2000, py::arg("perm_B") = 500,
        py::arg("workers") = 0, py::arg("norm_target") = 0.8);

    m.def(
        "run_independence_diag",
        [](Index n, Index p, double rho, const std::string& error, long replications,
           std::uint64_t seed, const std::string& variant, int workers) {
            ExperimentConfig config = build_config(
                n, p, rho, error, {"RS"}, replications, 0.05, seed, 2000, 500,
                workers);
            const IndependenceDiag diag = run_independence_diag(
                config, variant == "RM2" ? MaxVariant::RM2 : MaxVariant::RM1);
            py::dict out;
            out["correlation"] = diag.correlation;
            out["joint_upper_upper"] = diag.joint_upper_upper;
            out["marginal_fraction"] = diag.marginal_fraction;
            out["sum_rejection_rate"] = diag.sum_rejection_rate;
            out["replications"] = diag.replications;
            return out;
        },
        py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("error"),
        py::arg("replications"), py::arg("seed"), py::arg("variant") = "RM1",
        py::arg("workers") = 0);
}
