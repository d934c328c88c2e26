#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxsum/io.hpp"
#include "maxsum/mc.hpp"
#include "maxsum/model.hpp"
#include "maxsum/runner.hpp"
#include "maxsum/version.hpp"

namespace {

using namespace maxsum;

constexpr int k_exit_ok = 0;
constexpr int k_exit_error = 1;
constexpr int k_exit_usage = 64;

std::vector<Method> parse_methods(const std::string& csv) {
    std::vector<Method> methods;
    std::string token;
    std::stringstream stream(csv);
    while (std::getline(stream, token, ',')) {
        std::string name;
        for (char c : token) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            }
        }
        if (!name.empty()) methods.push_back(method_from_string(name));
    }
    if (methods.empty()) throw DomainError("empty method list");
    return methods;
}

bool contains(const std::vector<Method>& methods, Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    char buffer[32];
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

struct TestArgs {
    std::string design_path;
    std::string response_path;
    std::string response_col;
    std::string methods_csv = "RS,RM1,RM2,RC1,RC2,EB,MAX,COM";
    std::string out_path = "maxsum_report.jsonl";
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int bootstrap_B = 2000;
    int perm_B = 2000;  // single-dataset default; campaigns use 500
    int cv_splits = 50;
    int cv_kmax = 20;
    bool header = false;
};

int run_test(const TestArgs& args) {
    const io::DelimitedTable design = io::read_delimited(args.design_path, args.header);

    Dataset data;
    if (!args.response_col.empty()) {
        const io::DesignResponse parts = io::split_response(design, args.response_col);
        data.X = parts.X;
        data.y = parts.y;
    } else if (!args.response_path.empty()) {
        data.X = design.values;
        data.y = io::read_response_file(args.response_path, args.header);
    } else {
        throw DomainError("provide --response FILE or --response-col NAME");
    }
    validate(data);

    std::vector<Method> methods = parse_methods(args.methods_csv);
    // The Cauchy combinations ride along whenever both components are present.
    if (contains(methods, Method::RS) && contains(methods, Method::RM1) &&
        !contains(methods, Method::RC1)) {
        methods.push_back(Method::RC1);
    }
    if (contains(methods, Method::RS) && contains(methods, Method::RM2) &&
        !contains(methods, Method::RC2)) {
        methods.push_back(Method::RC2);
    }

    RunnerOptions options;
    options.bootstrap_B = args.bootstrap_B;
    options.perm_B = args.perm_B;
    options.precision.splits = args.cv_splits;
    options.precision.kmax = args.cv_kmax;

    TestRunner runner(data, options, args.seed, 0);
    std::vector<TestReport> reports;
    reports.reserve(methods.size());
    for (Method m : methods) reports.push_back(runner.report(m));

    io::write_file(args.out_path, io::reports_jsonl(reports));
    std::cout << io::reports_text(reports, args.alpha);
    std::cout << "report written to " << args.out_path << "\n";
    return k_exit_ok;
}

struct SimulateArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 0;
};

void append_snapshot(io::RunManifest& manifest, const ExperimentConfig& config) {
    auto add = [&manifest](const std::string& key, const std::string& value) {
        manifest.config_snapshot.emplace_back(key, value);
    };
    add("n", std::to_string(config.n));
    add("p", std::to_string(config.p));
    add("cov.kind", "ar1");
    add("cov.rho", std::to_string(config.cov.rho));
    add("error", to_string(config.error.kind));
    std::string methods;
    for (Method m : config.methods) {
        if (!methods.empty()) methods += ",";
        methods += to_string(m);
    }
    add("methods", methods);
    add("replications", std::to_string(config.replications));
    add("alpha", std::to_string(config.alpha));
    add("bootstrap.B", std::to_string(config.bootstrap_B));
    add("perm.B", std::to_string(config.perm_B));
    add("precision.splits", std::to_string(config.precision.splits));
    add("precision.kmax", std::to_string(config.precision.kmax));
    switch (config.signal.design) {
        case SignalDesign::Null:
            add("signal.design", "null");
            break;
        case SignalDesign::DenseRandom:
            add("signal.design", "dense_random");
            add("signal.norm", std::to_string(config.signal.norm_target));
            add("signal.q", std::to_string(config.signal.offset));
            break;
        case SignalDesign::ThetaPattern:
            add("signal.design", "theta_pattern");
            break;
    }
}

int run_simulate(const SimulateArgs& args) {
    io::SimulationSpec spec = io::parse_simulation_config(args.config_path);
    spec.config.seed = args.seed;
    spec.config.workers = args.workers;

    std::filesystem::create_directories(args.out_dir);
    const auto out = [&args](const std::string& name) {
        return (std::filesystem::path(args.out_dir) / name).string();
    };

    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.seed = args.seed;
    manifest.workers = args.workers;
    manifest.version = k_version;
    manifest.started_at = timestamp_utc();
    append_snapshot(manifest, spec.config);

    const auto start = std::chrono::steady_clock::now();
    switch (spec.kind) {
        case io::ExperimentKind::Size: {
            manifest.config_snapshot.emplace_back("experiment", "size");
            const SizeTable table = run_size(spec.config);
            io::write_file(out("size_table.jsonl"), io::size_table_jsonl(table));
            io::write_file(out("size_table.txt"), io::size_table_text(table));
            manifest.outputs = {out("size_table.jsonl"), out("size_table.txt")};
            std::cout << io::size_table_text(table);
            break;
        }
        case io::ExperimentKind::Power: {
            manifest.config_snapshot.emplace_back("experiment", "power");
            std::string grid;
            for (int g : spec.grid) {
                if (!grid.empty()) grid += ",";
                grid += std::to_string(g);
            }
            manifest.config_snapshot.emplace_back("signal.grid", grid);
            const PowerCurve curve = run_power(spec.config, spec.grid);
            io::write_file(out("power_curve.jsonl"), io::power_curve_jsonl(curve));
            io::write_file(out("power_curve.txt"), io::power_curve_text(curve));
            manifest.outputs = {out("power_curve.jsonl"), out("power_curve.txt")};
            std::cout << io::power_curve_text(curve);
            break;
        }
        case io::ExperimentKind::IndependenceDiag: {
            manifest.config_snapshot.emplace_back("experiment", "diag");
            manifest.config_snapshot.emplace_back(
                "diag.variant", spec.diag_variant == MaxVariant::RM1 ? "RM1" : "RM2");
            const IndependenceDiag diag =
                run_independence_diag(spec.config, spec.diag_variant);
            io::write_file(out("independence_diag.jsonl"), io::diag_jsonl(diag));
            io::write_file(out("independence_diag.txt"), io::diag_text(diag));
            manifest.outputs = {out("independence_diag.jsonl"),
                                out("independence_diag.txt")};
            std::cout << io::diag_text(diag);
            break;
        }
    }
    const auto stop = std::chrono::steady_clock::now();
    manifest.duration_seconds =
        std::chrono::duration<double>(stop - start).count();

    io::write_file(out("manifest.json"), io::manifest_json(manifest));
    std::cout << "outputs written to " << args.out_dir << "\n";
    return k_exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank-based max-sum tests for high-dimensional linear regression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", maxsum::k_version);

    TestArgs test_args;
    CLI::App* test_cmd =
        app.add_subcommand("test", "Run global tests on a dataset");
    test_cmd->add_option("--design", test_args.design_path,
                         "Delimited design matrix, one observation per row")
        ->required();
    CLI::Option* response_file = test_cmd->add_option(
        "--response", test_args.response_path, "Single-column response file");
    test_cmd
        ->add_option("--response-col", test_args.response_col,
                     "Response column of the design file (name or 0-based index)")
        ->excludes(response_file);
    test_cmd->add_option("--methods", test_args.methods_csv,
                         "Comma-separated subset of RS,RM1,RM2,RC1,RC2,EB,MAX,COM");
    test_cmd->add_option("--alpha", test_args.alpha, "Nominal level")
        ->default_val(0.05);
    test_cmd->add_option("--seed", test_args.seed, "Seed for resampling calibrations")
        ->default_val(0);
    test_cmd->add_option("--bootstrap-B", test_args.bootstrap_B,
                         "Multiplier replicates for RM1/RM2")
        ->default_val(2000);
    test_cmd->add_option("--perm-B", test_args.perm_B, "Permutations for EB")
        ->default_val(2000);
    test_cmd->add_option("--cv-splits", test_args.cv_splits,
                         "Cross-validation splits for the banded precision")
        ->default_val(50);
    test_cmd->add_option("--cv-kmax", test_args.cv_kmax,
                         "Largest bandwidth in the cross-validation grid")
        ->default_val(20);
    test_cmd->add_flag("--header", test_args.header,
                       "Input files carry a header row");
    test_cmd->add_option("--out", test_args.out_path, "Report file (JSON lines)")
        ->default_val("maxsum_report.jsonl");

    SimulateArgs sim_args;
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "Run a Monte Carlo campaign from a config file");
    sim_cmd->add_option("config", sim_args.config_path, "Campaign config file")
        ->required();
    sim_cmd->add_option("--out-dir", sim_args.out_dir, "Output directory")
        ->required();
    sim_cmd->add_option("--seed", sim_args.seed, "Master seed (all randomness)")
        ->required();
    sim_cmd->add_option("--workers", sim_args.workers,
                        "Worker threads (0 = logical cores)")
        ->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return k_exit_usage;
    }

    try {
        if (test_cmd->parsed()) return run_test(test_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_error;
    }
    return k_exit_usage;
}
