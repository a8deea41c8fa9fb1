// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Run with no arguments for all criteria, or pass criterion numbers to select.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tenrank/experiment.hpp"
#include "tenrank/rng.hpp"

using namespace tenrank;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const CellMetrics& metrics_for(const ResultTable& table, const std::string& estimator) {
    for (const ResultRow& row : table.rows) {
        if (!row.error.empty()) throw std::runtime_error("cell aborted: " + row.error);
        if (row.estimator == estimator) return row.metrics;
    }
    throw std::runtime_error("no row for estimator " + estimator);
}

EstimatorSpec make_estimator(Method method, Criterion crit, int variant, Stage stage,
                             double nu = 0.0) {
    EstimatorSpec est;
    est.method = method;
    est.penalty.criterion = crit;
    est.penalty.variant = variant;
    est.penalty.nu = nu;
    est.stage = stage;
    return est;
}

ExperimentConfig table_config(SimModel model, std::int64_t d, std::int64_t T, int reps,
                              std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.cells = {ModelSpec::preset(model, d, d, T, 0)};
    cfg.replications = reps;
    cfg.master_seed = seed;
    return cfg;
}

// --- Criterion 1: TOPUP/TIPUP oracle equivalence on exhaustive small cases ---
Check criterion1() {
    Check c;
    std::mt19937 gen(20240601);
    std::uniform_int_distribution<int> dim_pick(1, 3), order_pick(1, 3), t_pick(3, 6), h_pick(1, 2);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int K = order_pick(gen);
        std::vector<std::int64_t> dims;
        for (int k = 0; k < K; ++k) dims.push_back(dim_pick(gen));
        const std::int64_t T = t_pick(gen);
        const int h0 = h_pick(gen);
        TensorSeries s = oracle::random_series(dims, T, gen);
        const int mode = static_cast<int>(static_cast<unsigned>(gen()) % dims.size());

        Eigen::MatrixXd top_want = oracle::naive_topup(s, mode, h0);
        Eigen::MatrixXd tip_want = oracle::naive_tipup(s, mode, h0);
        const double top_err = (topup(s, mode, h0).stat - top_want).cwiseAbs().maxCoeff() /
                               std::max(top_want.cwiseAbs().maxCoeff(), 1e-300);
        const double tip_err = (tipup(s, mode, h0).stat - tip_want).cwiseAbs().maxCoeff() /
                               std::max(tip_want.cwiseAbs().maxCoeff(), 1e-300);
        worst = std::max({worst, top_err, tip_err});
    }
    c.expect(worst < 1e-12, "worst stat deviation " + fmt(worst));
    c.detail << "1000 cases, worst relative deviation " << fmt(worst);
    return c;
}

// --- Criterion 2: noiseless exact rank recovery for every estimator ---
Check criterion2() {
    Check c;
    const int seeds = 100;
    std::vector<char> seed_exact(seeds, 0);
    parallel_for(seeds, effective_threads(0), [&](std::int64_t seed) {
        std::mt19937 gen(9000 + static_cast<unsigned>(seed));
        TensorSeries s = oracle::noiseless_signal(6, 5, 2, 3, 50, gen);
        EstimateOptions opts;
        opts.m_star = {3, 3};
        opts.tau_h0_range = {};
        EstimateReport rep = estimate_report(s, opts);
        bool all = rep.estimators.size() == 12;
        for (const EstimatorReport& e : rep.estimators)
            if (e.ranks != std::vector<int>{2, 3}) all = false;
        seed_exact[static_cast<std::size_t>(seed)] = all ? 1 : 0;
    });
    int exact = 0;
    for (char ok : seed_exact) exact += ok;
    c.expect(exact == seeds, "only " + std::to_string(exact) + "/100 seeds exact");
    c.detail << exact << "/100 seeds exact across 12 estimators";
    return c;
}

// --- Criterion 3: Table-3 style cells for M1 ---
Check criterion3() {
    Check c;
    ExperimentConfig cfg = table_config(SimModel::m1, 20, 300, 200, 101);
    cfg.estimators = {make_estimator(Method::tipup, Criterion::ic, 2, Stage::final),
                      make_estimator(Method::tipup, Criterion::er, 1, Stage::final)};
    ResultTable t = run_experiment(cfg);
    const double ic_final = metrics_for(t, "ic2-tipup-final").proportion_correct;
    const double er_final = metrics_for(t, "er1-tipup-final").proportion_correct;
    c.expect(ic_final >= 0.98, "ic2-tipup-final " + fmt(ic_final) + " < 0.98");
    c.expect(er_final >= 0.98, "er1-tipup-final " + fmt(er_final) + " < 0.98");

    ExperimentConfig cfg2 = table_config(SimModel::m1, 40, 100, 200, 102);
    cfg2.estimators = {make_estimator(Method::topup, Criterion::ic, 2, Stage::initial)};
    ResultTable t2 = run_experiment(cfg2);
    const double ic_init = metrics_for(t2, "ic2-topup-initial").proportion_correct;
    c.expect(ic_init <= 0.05, "ic2-topup-initial " + fmt(ic_init) + " > 0.05");

    c.detail << "d=20 T=300: ic2-tip-final " << fmt(ic_final) << ", er1-tip-final " << fmt(er_final)
             << "; d=40 T=100: ic2-top-initial " << fmt(ic_init);
    return c;
}

// --- Criterion 4: Table-4 style cell for M2 ---
Check criterion4() {
    Check c;
    ExperimentConfig cfg = table_config(SimModel::m2, 40, 500, 200, 103);
    cfg.estimators = {make_estimator(Method::tipup, Criterion::er, 1, Stage::final),
                      make_estimator(Method::topup, Criterion::er, 1, Stage::final),
                      make_estimator(Method::tipup, Criterion::er, 1, Stage::initial)};
    ResultTable t = run_experiment(cfg);
    const double tip_final = metrics_for(t, "er1-tipup-final").proportion_correct;
    const double top_final = metrics_for(t, "er1-topup-final").proportion_correct;
    const double tip_init = metrics_for(t, "er1-tipup-initial").proportion_correct;
    c.expect(tip_final >= 0.97, "er1-tipup-final " + fmt(tip_final) + " < 0.97");
    c.expect(top_final >= 0.30 && top_final <= 0.50,
             "er1-topup-final " + fmt(top_final) + " outside 0.40 +/- 0.10");
    c.expect(tip_init >= 0.97, "er1-tipup-initial " + fmt(tip_init) + " < 0.97");
    c.detail << "er1-tip-final " << fmt(tip_final) << ", er1-top-final " << fmt(top_final)
             << ", er1-tip-initial " << fmt(tip_init);
    return c;
}

// --- Criterion 5: Table-7 style RMSE cell for M3 ---
Check criterion5() {
    Check c;
    ExperimentConfig cfg = table_config(SimModel::m3, 40, 1000, 200, 104);
    cfg.estimators = {make_estimator(Method::tipup, Criterion::er, 1, Stage::final),
                      make_estimator(Method::topup, Criterion::er, 1, Stage::initial)};
    ResultTable t = run_experiment(cfg);
    const double tip_rmse = metrics_for(t, "er1-tipup-final").rmse_joint;
    const double top_rmse = metrics_for(t, "er1-topup-initial").rmse_joint;
    c.expect(tip_rmse <= 0.05, "er1-tipup-final rmse " + fmt(tip_rmse) + " > 0.05");
    c.expect(top_rmse >= 0.95 && top_rmse <= 1.05,
             "er1-topup-initial rmse " + fmt(top_rmse) + " outside 1.00 +/- 0.05");
    c.detail << "er1-tip-final rmse " << fmt(tip_rmse) << ", er1-top-initial rmse " << fmt(top_rmse);
    return c;
}

// --- Criterion 6: Table-9 style rank-pair frequencies for M4 ---
Check criterion6() {
    Check c;
    ExperimentConfig cfg = table_config(SimModel::m4, 40, 200, 300, 105);
    cfg.estimators = {make_estimator(Method::tipup, Criterion::ic, 2, Stage::final),
                      make_estimator(Method::tipup, Criterion::er, 1, Stage::initial)};
    ResultTable t = run_experiment(cfg);
    const CellMetrics& ic = metrics_for(t, "ic2-tipup-final");
    const CellMetrics& er = metrics_for(t, "er1-tipup-initial");
    auto freq = [](const CellMetrics& m, std::vector<int> r) {
        auto it = m.frequency.find(r);
        return it == m.frequency.end() ? 0.0 : it->second;
    };
    const double f22 = freq(ic, {2, 2});
    const double f11 = freq(er, {1, 1});
    c.expect(f22 >= 0.81 && f22 <= 0.93, "ic2-tipup-final (2,2) " + fmt(f22) + " outside 0.87 +/- 0.06");
    c.expect(f11 >= 0.818 && f11 <= 0.938,
             "er1-tipup-initial (1,1) " + fmt(f11) + " outside 0.878 +/- 0.06");
    c.detail << "ic2-tip-final (2,2) " << fmt(f22) << ", er1-tip-initial (1,1) " << fmt(f11);
    return c;
}

// --- Criterion 7: known-nu IC for M3 ---
Check criterion7() {
    Check c;
    ExperimentConfig cfg = table_config(SimModel::m3, 40, 500, 200, 106);
    cfg.estimators = {make_estimator(Method::tipup, Criterion::ic, 2, Stage::final, 0.6)};
    ResultTable t = run_experiment(cfg);
    const double rmse = metrics_for(t, "ic2-tipup-final").rmse_joint;
    c.expect(rmse <= 0.05, "ic2-tipup-final rmse " + fmt(rmse) + " > 0.05 with nu=0.6");
    c.detail << "ic2-tip-final rmse " << fmt(rmse) << " (nu = 0.6)";
    return c;
}

// --- Criterion 8: robustified-c study on M1 ---
Check criterion8() {
    Check c;
    const int seeds = 20;
    std::vector<std::pair<int, int>> chosen(seeds);
    parallel_for(seeds, effective_threads(0), [&](std::int64_t i) {
        ModelSpec spec = ModelSpec::preset(SimModel::m1, 80, 80, 300, derive_seed(107, static_cast<std::uint64_t>(i)));
        SimOutput sim = generate(spec);
        TensorSeries series = demean(sim.series);
        TuneOptions opts;
        opts.method = Method::topup;
        opts.ic_variant = 2;
        opts.m_star = 10;
        TuneResult r1 = tune_c(series, 0, opts);
        TuneResult r2 = tune_c(series, 1, opts);
        chosen[static_cast<std::size_t>(i)] = {r1.found ? r1.rank : -1, r2.found ? r2.rank : -1};
    });
    int hits = 0;
    for (auto [a, b] : chosen)
        if (a == 5 && b == 5) ++hits;
    c.expect(hits >= 18, "rank 5 chosen in both modes on only " + std::to_string(hits) + "/20 seeds");
    c.detail << hits << "/20 seeds chose rank 5 in both modes";
    return c;
}

// --- Criterion 9: property suites ---
Check criterion9() {
    Check c;
    std::mt19937 gen(20240607);

    // Unfold round trips (bitwise) on 100 random tensors.
    {
        std::uniform_int_distribution<int> dim_pick(1, 4), order_pick(1, 4);
        bool ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            const int K = order_pick(gen);
            std::vector<std::int64_t> dims;
            for (int k = 0; k < K; ++k) dims.push_back(dim_pick(gen));
            Tensor x = oracle::random_tensor(dims, gen);
            const int mode = static_cast<int>(static_cast<unsigned>(gen()) % dims.size());
            ok = ok && mode_refold(mode_unfold(x, mode), mode, dims) == x;
        }
        c.expect(ok, "unfold round trip failed");
    }
    // Orthogonal invariance of spectra, 100 instances at 1e-9.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            TensorSeries s = oracle::random_series({4, 3}, 8, gen);
            const int mode = trial % 2;
            Eigen::MatrixXd q = oracle::random_orthonormal(s.dims()[static_cast<std::size_t>(mode)],
                                                           s.dims()[static_cast<std::size_t>(mode)], gen);
            std::vector<Tensor> rot;
            for (std::int64_t t = 0; t < s.length(); ++t)
                rot.push_back(mode_product(s.obs(t), q, mode));
            TensorSeries sr(std::move(rot));
            const Method method = trial % 4 < 2 ? Method::topup : Method::tipup;
            EigenSpectrum a = spectrum(auto_moment(s, method, 0, 1));
            EigenSpectrum b = spectrum(auto_moment(sr, method, 0, 1));
            for (std::size_t i = 0; i < a.values.size(); ++i)
                worst = std::max(worst, std::abs(a.values[i] - b.values[i]) / a.values[0]);
        }
        c.expect(worst < 1e-9, "orthogonal invariance deviation " + fmt(worst));
    }
    // c^4 scale equivariance, 100 instances at 1e-10.
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> c_pick(0.3, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            TensorSeries s = oracle::random_series({3, 3}, 6, gen);
            const double cc = c_pick(gen);
            std::vector<Tensor> scaled;
            for (std::int64_t t = 0; t < s.length(); ++t) {
                Tensor x = s.obs(t);
                for (std::int64_t i = 0; i < x.size(); ++i) x[i] *= cc;
                scaled.push_back(std::move(x));
            }
            TensorSeries sc(std::move(scaled));
            const double c4 = cc * cc * cc * cc;
            const Method method = trial % 2 ? Method::topup : Method::tipup;
            EigenSpectrum a = spectrum(auto_moment(s, method, 0, 1));
            EigenSpectrum b = spectrum(auto_moment(sc, method, 0, 1));
            for (std::size_t i = 0; i < a.values.size(); ++i)
                worst = std::max(worst, std::abs(b.values[i] - c4 * a.values[i]) / (c4 * a.values[0]));
        }
        c.expect(worst < 1e-10, "scale equivariance deviation " + fmt(worst));
    }
    // K=1 TOPUP == TIPUP, 100 instances.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            TensorSeries s = oracle::random_series({5}, 7, gen);
            Eigen::MatrixXd a = topup(s, 0, 2).stat;
            Eigen::MatrixXd b = tipup(s, 0, 2).stat;
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff());
        }
        c.expect(worst < 1e-12, "K=1 equality deviation " + fmt(worst));
    }
    // ER argmin invariance under joint (lambda, h) scaling + IC monotone in g,
    // 100 random spectra each.
    {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        bool er_ok = true, ic_ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> values(8);
            for (double& v : values) v = 10.0 * unif(gen);
            std::sort(values.begin(), values.end(), std::greater<>());
            const int base_rank = er_select(values, 0.2, 6).rank;
            for (double cc : {0.25, 4.0, 64.0}) {
                std::vector<double> scaled = values;
                for (double& v : scaled) v *= cc;
                if (er_select(scaled, cc * 0.2, 6).rank != base_rank) er_ok = false;
            }
            int prev = 8;
            for (double g : {0.05, 0.2, 1.0, 4.0, 20.0}) {
                const int r = ic_select(values, g, 6).rank;
                if (r > prev) ic_ok = false;
                prev = r;
            }
        }
        c.expect(er_ok, "ER scaling invariance failed");
        c.expect(ic_ok, "IC monotonicity in g failed");
    }
    // tune-c: rank paths non-increasing in c on every subsample; 10 series x 10
    // subsample columns = 100 randomized instances.
    {
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            TensorSeries s = oracle::noiseless_signal(8, 8, 2, 2, 40, gen, 2.0);
            TuneOptions opts;
            opts.method = trial % 2 ? Method::topup : Method::tipup;
            opts.m_star = 4;
            TuneResult r = tune_c(s, trial % 2, opts);
            const std::size_t J = r.ranks.front().size();
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t ci = 1; ci < r.ranks.size(); ++ci)
                    if (r.ranks[ci][j] > r.ranks[ci - 1][j]) ok = false;
        }
        c.expect(ok, "tune-c monotonicity in c failed");
    }
    c.detail << "round-trip, invariance, equivariance, K=1, ER/IC and tune-c properties over >= 100 "
                "instances each";
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::pair<int, std::function<Check()>>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};

    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    bool all_ok = true;
    for (auto& [num, fn] : criteria) {
        if (!wanted.empty() && !wanted.count(num)) continue;
        const auto start = std::chrono::steady_clock::now();
        Check result;
        try {
            result = fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail << "exception: " << e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion " << num << " ("
                  << fmt(secs) << "s): " << result.detail.str() << std::endl;
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}
