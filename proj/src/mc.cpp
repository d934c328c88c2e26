#include "maxsum/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace maxsum {

double MethodCell::std_error() const {
    const double f = frequency();
    return std::sqrt(f * (1.0 - f) / static_cast<double>(replications));
}

void validate_config(const ExperimentConfig& config) {
    if (config.n < 2 || config.p < 1) throw ConfigError("need n >= 2 and p >= 1");
    if (config.replications < 1) throw ConfigError("replications must be >= 1");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0,1)");
    }
    if (config.methods.empty()) throw ConfigError("method set must be non-empty");
    if (!(std::abs(config.cov.rho) < 1.0)) throw ConfigError("|rho| must be < 1");
}

namespace {

// Dynamic scheduling over replicate indices. Work units must derive all
// randomness from their index, so the outcome is identical for any worker
// count; the first failure aborts the campaign with its replicate index.
template <typename Body>
void parallel_replicates(long count, int workers, Body&& body) {
    long pool = workers > 0 ? workers
                            : static_cast<long>(std::thread::hardware_concurrency());
    pool = std::max<long>(1, std::min<long>(pool, count));
    if (pool == 1) {
        for (long r = 0; r < count; ++r) {
            try {
                body(r);
            } catch (const std::exception& e) {
                throw Error("replicate " + std::to_string(r) + ": " + e.what());
            }
        }
        return;
    }

    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    long failed_replicate = -1;

    auto drain = [&]() {
        for (;;) {
            const long r = next.fetch_add(1);
            if (r >= count || stop.load()) return;
            try {
                body(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                    failed_replicate = r;
                }
                stop.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) threads.emplace_back(drain);
    for (auto& thread : threads) thread.join();

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            throw Error("replicate " + std::to_string(failed_replicate) + ": " +
                        e.what());
        }
    }
}

RunnerOptions runner_options(const ExperimentConfig& config) {
    RunnerOptions options;
    options.bootstrap_B = config.bootstrap_B;
    options.perm_B = config.perm_B;
    options.precision = config.precision;
    options.precision.kmax =
        std::min<int>(options.precision.kmax, static_cast<int>(config.p) - 1);
    return options;
}

ExperimentConfig normalized(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    config.cov.p = config.p;
    validate_config(config);
    return config;
}

std::vector<MethodCell> aggregate(const ExperimentConfig& config,
                                  const std::vector<std::vector<double>>& pvalues) {
    std::vector<MethodCell> cells;
    cells.reserve(config.methods.size());
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
        MethodCell cell;
        cell.method = config.methods[m];
        cell.replications = static_cast<long>(pvalues.size());
        for (const auto& row : pvalues) {
            if (row[m] < config.alpha) ++cell.rejections;
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace

SizeTable run_size(const ExperimentConfig& config_in) {
    const ExperimentConfig config = normalized(config_in);
    if (config.signal.design != SignalDesign::Null) {
        throw ConfigError("size experiments require a null signal design");
    }
    const CovarianceModel cov = make_covariance(config.cov);
    const Vector beta0 = Vector::Zero(config.p);
    const RunnerOptions options = runner_options(config);

    std::vector<std::vector<double>> pvalues(
        static_cast<std::size_t>(config.replications),
        std::vector<double>(config.methods.size(), 1.0));

    parallel_replicates(config.replications, config.workers, [&](long r) {
        Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(r),
                                 stream_tag::k_data);
        const Dataset data = generate(config.n, cov, beta0, config.error, rng);
        TestRunner runner(data, options, config.seed, static_cast<std::uint64_t>(r));
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            pvalues[static_cast<std::size_t>(r)][m] =
                runner.report(config.methods[m]).pvalue;
        }
    });

    SizeTable table;
    table.config = config;
    table.cells = aggregate(config, pvalues);
    return table;
}

PowerCurve run_power(const ExperimentConfig& config_in, const std::vector<int>& grid) {
    const ExperimentConfig config = normalized(config_in);
    if (config.signal.design == SignalDesign::Null) {
        throw ConfigError("power experiments need a non-null signal design");
    }
    if (grid.empty()) throw ConfigError("power grid must be non-empty");

    const CovarianceModel cov = make_covariance(config.cov);
    const RunnerOptions options = runner_options(config);

    PowerCurve curve;
    curve.config = config;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        const int count = grid[g];
        Vector fixed_beta;
        if (config.signal.design == SignalDesign::ThetaPattern) {
            fixed_beta = make_beta_design2(config.p, count, config.n, cov.sigma);
        }
        std::vector<std::vector<double>> pvalues(
            static_cast<std::size_t>(config.replications),
            std::vector<double>(config.methods.size(), 1.0));

        parallel_replicates(config.replications, config.workers, [&](long r) {
            const std::uint64_t key =
                static_cast<std::uint64_t>(g) *
                    static_cast<std::uint64_t>(config.replications) +
                static_cast<std::uint64_t>(r);
            Vector beta;
            if (config.signal.design == SignalDesign::DenseRandom) {
                Rng beta_rng = Rng::substream(config.seed, key, stream_tag::k_beta);
                beta = make_beta_design1(config.p, count, config.signal.offset,
                                         beta_rng, config.signal.norm_target);
            } else {
                beta = fixed_beta;
            }
            Rng rng = Rng::substream(config.seed, key, stream_tag::k_data);
            const Dataset data = generate(config.n, cov, beta, config.error, rng);
            TestRunner runner(data, options, config.seed, key);
            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                pvalues[static_cast<std::size_t>(r)][m] =
                    runner.report(config.methods[m]).pvalue;
            }
        });

        PowerPoint point;
        point.signal_count = count;
        point.cells = aggregate(config, pvalues);
        curve.points.push_back(std::move(point));
    }
    return curve;
}

IndependenceDiag run_independence_diag(const ExperimentConfig& config_in,
                                       MaxVariant variant) {
    ExperimentConfig config = normalized(config_in);
    if (config.signal.design != SignalDesign::Null) {
        throw ConfigError("the independence diagnostic requires a null design");
    }
    const CovarianceModel cov = make_covariance(config.cov);
    const Vector beta0 = Vector::Zero(config.p);
    const RunnerOptions options = runner_options(config);
    const double centering = GumbelCalibration(config.p).centering;

    const long reps = config.replications;
    std::vector<double> sum_stats(static_cast<std::size_t>(reps));
    std::vector<double> max_stats(static_cast<std::size_t>(reps));

    parallel_replicates(reps, config.workers, [&](long r) {
        Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(r),
                                 stream_tag::k_data);
        const Dataset data = generate(config.n, cov, beta0, config.error, rng);
        TestRunner runner(data, options, config.seed, static_cast<std::uint64_t>(r));
        sum_stats[static_cast<std::size_t>(r)] = runner.statistic_rs();
        const double raw = variant == MaxVariant::RM1 ? runner.statistic_rm1()
                                                      : runner.statistic_rm2();
        max_stats[static_cast<std::size_t>(r)] = raw - centering;
    });

    IndependenceDiag diag;
    diag.config = config;
    diag.variant = variant;
    diag.replications = reps;

    const double mean_sum =
        std::accumulate(sum_stats.begin(), sum_stats.end(), 0.0) / reps;
    const double mean_max =
        std::accumulate(max_stats.begin(), max_stats.end(), 0.0) / reps;
    double ss = 0.0, mm = 0.0, sm = 0.0;
    for (long r = 0; r < reps; ++r) {
        const double ds = sum_stats[static_cast<std::size_t>(r)] - mean_sum;
        const double dm = max_stats[static_cast<std::size_t>(r)] - mean_max;
        ss += ds * ds;
        mm += dm * dm;
        sm += ds * dm;
    }
    diag.correlation = sm / std::sqrt(ss * mm);

    // Empirical marginal deciles: exactly floor(reps/10) replicates land above
    // each cutoff, so the joint cell isolates the factorization claim.
    const long tail = reps / 10;
    diag.marginal_fraction = static_cast<double>(tail) / static_cast<double>(reps);
    std::vector<double> sorted_sum = sum_stats;
    std::vector<double> sorted_max = max_stats;
    std::sort(sorted_sum.begin(), sorted_sum.end(), std::greater<>());
    std::sort(sorted_max.begin(), sorted_max.end(), std::greater<>());
    const double cut_sum = sorted_sum[static_cast<std::size_t>(tail)];
    const double cut_max = sorted_max[static_cast<std::size_t>(tail)];

    long upper_upper = 0, upper_lower = 0, lower_upper = 0;
    long sum_rejections = 0;
    for (long r = 0; r < reps; ++r) {
        const bool in_sum = sum_stats[static_cast<std::size_t>(r)] > cut_sum;
        const bool in_max = max_stats[static_cast<std::size_t>(r)] > cut_max;
        upper_upper += in_sum && in_max;
        upper_lower += in_sum && !in_max;
        lower_upper += !in_sum && in_max;
        if (normal_upper_tail(sum_stats[static_cast<std::size_t>(r)]) < config.alpha) {
            ++sum_rejections;
        }
    }
    const double denom = static_cast<double>(reps);
    diag.joint_upper_upper = upper_upper / denom;
    diag.joint_upper_lower = upper_lower / denom;
    diag.joint_lower_upper = lower_upper / denom;
    diag.joint_lower_lower =
        (reps - upper_upper - upper_lower - lower_upper) / denom;
    diag.sum_rejection_rate = sum_rejections / denom;
    return diag;
}

}  // namespace maxsum
