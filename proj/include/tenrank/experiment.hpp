#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tenrank/criteria.hpp"
#include "tenrank/iterate.hpp"
#include "tenrank/simgen.hpp"

namespace tenrank {

/// Subtract the entrywise time-average tensor from every observation.
TensorSeries demean(const TensorSeries& series);

/// One estimator column of a results table: how the ranks are estimated and at
/// which stage of the iteration they are read off.
struct EstimatorSpec {
    Method method = Method::tipup;
    PenaltySpec penalty;
    Stage stage = Stage::final;

    std::string label() const;  // e.g. "ic2-tipup-final"
};

struct ExperimentConfig {
    std::vector<ModelSpec> cells;
    std::vector<EstimatorSpec> estimators;
    int replications = 200;
    int h0 = 1;
    std::vector<int> m_star;  // optional per-mode override applied to every cell
    int m_star_cap = 20;
    bool demean_data = true;
    int max_iter = 50;
    double subspace_tol = 1e-6;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 -> hardware concurrency; always capped by TENRANK_THREADS
    MomentOptions moment;

    void validate() const;
};

struct CellMetrics {
    int n = 0;
    double proportion_correct = 0.0;
    double rmse_joint = 0.0;
    std::vector<double> rmse_mode;
    /// Relative frequency of each estimated rank vector; sums to 1.
    std::map<std::vector<int>, double> frequency;
};

struct ResultRow {
    std::string model;
    std::int64_t d1 = 0, d2 = 0, T = 0;
    std::string estimator;
    Stage stage = Stage::final;
    CellMetrics metrics;
    std::string error;  // non-empty marks an aborted cell's diagnostic row
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

/// Monte-Carlo driver: for every cell, run `replications` independent
/// replications (seeded per replication from the master seed, so results do
/// not depend on the thread count) and aggregate correct-identification
/// proportions, RMSEs and rank-vector frequencies per estimator.
ResultTable run_experiment(const ExperimentConfig& cfg);

void write_result_csv(std::ostream& out, const ResultTable& table);

/// Options for estimating ranks of one observed series.
struct EstimateOptions {
    std::vector<EstimatorSpec> estimators;  // empty -> ic2/er1 x topup/tipup x all stages
    int h0 = 1;
    std::vector<int> m_star;
    int m_star_cap = 20;
    bool demean_data = true;
    int max_iter = 50;
    double subspace_tol = 1e-6;
    std::vector<int> tau_h0_range = {1, 2, 3, 4};
    int tau_m_max = 3;
    MomentOptions moment;
};

struct EstimatorReport {
    std::string label;
    Method method = Method::tipup;
    PenaltySpec penalty;
    Stage stage = Stage::final;
    std::vector<int> ranks;
    bool converged = false;
    int iterations = 0;
    std::vector<std::vector<int>> rank_history;  // criterion selections per iteration
};

struct EstimateReport {
    std::vector<std::int64_t> dims;
    std::int64_t T = 0;
    bool demeaned = true;
    int h0 = 1;
    std::vector<EigenSpectrum> initial_spectra;      // per method x mode
    std::vector<EstimatorReport> estimators;
    std::vector<std::vector<TauRow>> tau_per_mode;   // [mode][row]
};

EstimateReport estimate_report(const TensorSeries& series, const EstimateOptions& opts);

/// Number of worker threads to use: `requested` (0 means hardware), capped by
/// the TENRANK_THREADS environment variable when set.
int effective_threads(int requested);

/// Deterministic parallel map: fn(i) for i in [0, n), any schedule.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

}  // namespace tenrank
