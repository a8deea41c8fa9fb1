#include "tenrank/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "tenrank/rng.hpp"

namespace tenrank {

TensorSeries demean(const TensorSeries& series) {
    const std::int64_t T = series.length();
    Tensor mean(series.dims());
    for (std::int64_t t = 0; t < T; ++t) {
        const Tensor& x = series.obs(t);
        for (std::int64_t i = 0; i < mean.size(); ++i) mean[i] += x[i];
    }
    for (std::int64_t i = 0; i < mean.size(); ++i) mean[i] /= static_cast<double>(T);

    std::vector<Tensor> out;
    out.reserve(static_cast<std::size_t>(T));
    for (std::int64_t t = 0; t < T; ++t) {
        Tensor x = series.obs(t);
        for (std::int64_t i = 0; i < x.size(); ++i) x[i] -= mean[i];
        out.push_back(std::move(x));
    }
    return TensorSeries(std::move(out));
}

std::string EstimatorSpec::label() const {
    return penalty.label() + "-" + method_name(method) + "-" + stage_name(stage);
}

void ExperimentConfig::validate() const {
    if (cells.empty()) throw input_error("experiment config needs at least one cell");
    if (estimators.empty()) throw input_error("experiment config needs at least one estimator");
    if (replications < 1) throw input_error("experiment config needs replications >= 1");
    for (const ModelSpec& cell : cells) cell.validate();
    for (const EstimatorSpec& est : estimators) est.penalty.validate();
}

int effective_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("TENRANK_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
    threads = std::min<std::int64_t>(std::max(threads, 1), n);
    if (threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

/// Estimators sharing (method, penalty) also share one iteration run.
struct EstimatorGroup {
    Method method;
    PenaltySpec penalty;
    int sweeps = 0;  // 0: initial only, 1: through one_step, -1: to convergence
    std::vector<std::pair<std::size_t, Stage>> outputs;  // estimator index, stage
};

std::vector<EstimatorGroup> group_estimators(const std::vector<EstimatorSpec>& estimators) {
    std::vector<EstimatorGroup> groups;
    for (std::size_t e = 0; e < estimators.size(); ++e) {
        const EstimatorSpec& est = estimators[e];
        auto same = [&](const EstimatorGroup& g) {
            return g.method == est.method && g.penalty.criterion == est.penalty.criterion &&
                   g.penalty.variant == est.penalty.variant && g.penalty.nu == est.penalty.nu &&
                   g.penalty.c_mult == est.penalty.c_mult && g.penalty.c0 == est.penalty.c0;
        };
        auto it = std::find_if(groups.begin(), groups.end(), same);
        if (it == groups.end()) {
            groups.push_back({est.method, est.penalty, 0, {}});
            it = groups.end() - 1;
        }
        const int need = est.stage == Stage::initial ? 0 : est.stage == Stage::one_step ? 1 : -1;
        if (it->sweeps != -1 && (need == -1 || need > it->sweeps)) it->sweeps = need;
        it->outputs.emplace_back(e, est.stage);
    }
    return groups;
}

struct RepOutcome {
    std::vector<std::vector<int>> ranks;  // per estimator
    std::string error;
};

RepOutcome run_replication(const ModelSpec& cell, const ExperimentConfig& cfg,
                           const std::vector<EstimatorGroup>& groups, std::uint64_t seed) {
    RepOutcome out;
    out.ranks.resize(cfg.estimators.size());

    ModelSpec spec = cell;
    spec.seed = seed;
    SimOutput sim = generate(spec);
    TensorSeries series = cfg.demean_data ? demean(sim.series) : std::move(sim.series);

    // The moment statistics depend only on (method, h0); share them across groups.
    IterOptions base;
    base.h0 = cfg.h0;
    base.max_iter = cfg.max_iter;
    base.subspace_tol = cfg.subspace_tol;
    base.m_star = cfg.m_star;
    base.m_star_cap = cfg.m_star_cap;
    base.moment = cfg.moment;
    const std::vector<int> m_star = resolve_m_star(series.dims(), base);

    std::map<Method, InitialStats> initials;
    for (const EstimatorGroup& g : groups)
        if (!initials.count(g.method))
            initials.emplace(g.method,
                             compute_initial_stats(series, g.method, cfg.h0, m_star, cfg.moment));

    for (const EstimatorGroup& g : groups) {
        IterOptions opts = base;
        opts.method = g.method;
        opts.penalty = g.penalty;
        const InitialStats* stats = &initials.at(g.method);

        if (g.sweeps == 0) {
            IterationState st = initial_state(series, opts, stats);
            for (const auto& [e, stage] : g.outputs) out.ranks[e] = st.selected;
            continue;
        }
        if (g.sweeps == 1) opts.max_iter = 1;
        IterationResult res = iterate(series, opts, stats);
        for (const auto& [e, stage] : g.outputs) out.ranks[e] = res.ranks_at(stage);
    }
    return out;
}

CellMetrics aggregate(const std::vector<RepOutcome>& outcomes, std::size_t estimator,
                      const std::vector<int>& true_ranks) {
    CellMetrics m;
    m.n = static_cast<int>(outcomes.size());
    const std::size_t K = true_ranks.size();
    std::vector<std::int64_t> sq_err(K, 0);
    std::int64_t correct = 0;
    std::map<std::vector<int>, std::int64_t> counts;
    for (const RepOutcome& rep : outcomes) {
        const std::vector<int>& r = rep.ranks[estimator];
        counts[r] += 1;
        if (r == true_ranks) ++correct;
        for (std::size_t k = 0; k < K; ++k) {
            const std::int64_t d = r[k] - true_ranks[k];
            sq_err[k] += d * d;
        }
    }
    m.proportion_correct = static_cast<double>(correct) / m.n;
    std::int64_t total_sq = 0;
    for (std::size_t k = 0; k < K; ++k) {
        total_sq += sq_err[k];
        m.rmse_mode.push_back(std::sqrt(static_cast<double>(sq_err[k]) / m.n));
    }
    m.rmse_joint = std::sqrt(static_cast<double>(total_sq) / (m.n * static_cast<double>(K)));
    for (const auto& [r, c] : counts) m.frequency[r] = static_cast<double>(c) / m.n;
    return m;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int threads = effective_threads(cfg.threads);
    const std::vector<EstimatorGroup> groups = group_estimators(cfg.estimators);

    ResultTable table;
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        const ModelSpec& cell = cfg.cells[c];
        const std::uint64_t cell_seed = derive_seed(cfg.master_seed, c);

        std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.replications));
        parallel_for(cfg.replications, threads, [&](std::int64_t r) {
            try {
                outcomes[static_cast<std::size_t>(r)] =
                    run_replication(cell, cfg, groups, derive_seed(cell_seed, static_cast<std::uint64_t>(r)));
            } catch (const std::exception& e) {
                outcomes[static_cast<std::size_t>(r)].error = e.what();
            }
        });

        std::string cell_error;
        for (const RepOutcome& rep : outcomes)
            if (!rep.error.empty()) {
                cell_error = rep.error;
                break;
            }

        if (!cell_error.empty()) {
            ResultRow row;
            row.model = sim_model_name(cell.model);
            row.d1 = cell.d1;
            row.d2 = cell.d2;
            row.T = cell.T;
            row.estimator = "aborted";
            row.error = cell_error;
            table.rows.push_back(std::move(row));
            continue;
        }

        const std::vector<int> true_ranks{cell.r1, cell.r2};
        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            ResultRow row;
            row.model = sim_model_name(cell.model);
            row.d1 = cell.d1;
            row.d2 = cell.d2;
            row.T = cell.T;
            row.estimator = cfg.estimators[e].label();
            row.stage = cfg.estimators[e].stage;
            row.metrics = aggregate(outcomes, e, true_ranks);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

void write_result_csv(std::ostream& out, const ResultTable& table) {
    out << "model,d1,d2,T,estimator,stage,n,proportion_correct,rmse_joint,rmse_mode1,rmse_mode2,"
           "top_rank_pairs,error\n";
    for (const ResultRow& row : table.rows) {
        out << row.model << ',' << row.d1 << ',' << row.d2 << ',' << row.T << ',' << row.estimator
            << ',' << stage_name(row.stage) << ',' << row.metrics.n << ',';
        if (row.error.empty()) {
            out << row.metrics.proportion_correct << ',' << row.metrics.rmse_joint << ',';
            for (std::size_t k = 0; k < 2; ++k) {
                if (k < row.metrics.rmse_mode.size()) out << row.metrics.rmse_mode[k];
                out << ',';
            }
            // Frequency map packed as r1xr2:freq pairs separated by ';'.
            std::vector<std::pair<std::vector<int>, double>> items(row.metrics.frequency.begin(),
                                                                   row.metrics.frequency.end());
            std::sort(items.begin(), items.end(),
                      [](const auto& a, const auto& b) { return a.second > b.second; });
            bool first = true;
            for (const auto& [r, freq] : items) {
                if (!first) out << ';';
                first = false;
                for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "x" : "") << r[k];
                out << ':' << freq;
            }
            out << ',';
        } else {
            out << ",,,,,";
        }
        out << row.error << '\n';
    }
}

EstimateReport estimate_report(const TensorSeries& input, const EstimateOptions& opts) {
    if (input.length() <= opts.h0) throw input_error("series length must exceed h0");

    EstimateReport report;
    report.dims = input.dims();
    report.T = input.length();
    report.demeaned = opts.demean_data;
    report.h0 = opts.h0;

    TensorSeries series = opts.demean_data ? demean(input) : input;

    std::vector<EstimatorSpec> estimators = opts.estimators;
    if (estimators.empty()) {
        for (Method method : {Method::topup, Method::tipup})
            for (Criterion crit : {Criterion::ic, Criterion::er})
                for (Stage stage : {Stage::initial, Stage::one_step, Stage::final}) {
                    EstimatorSpec est;
                    est.method = method;
                    est.penalty.criterion = crit;
                    est.penalty.variant = crit == Criterion::ic ? 2 : 1;
                    est.stage = stage;
                    estimators.push_back(est);
                }
    }

    IterOptions base;
    base.h0 = opts.h0;
    base.max_iter = opts.max_iter;
    base.subspace_tol = opts.subspace_tol;
    base.m_star = opts.m_star;
    base.m_star_cap = opts.m_star_cap;
    base.moment = opts.moment;
    const std::vector<int> m_star = resolve_m_star(series.dims(), base);

    std::map<Method, InitialStats> initials;
    for (Method method : {Method::topup, Method::tipup}) {
        bool used = std::any_of(estimators.begin(), estimators.end(),
                                [&](const EstimatorSpec& e) { return e.method == method; });
        if (!used) continue;
        initials.emplace(method, compute_initial_stats(series, method, opts.h0, m_star, opts.moment));
        for (const ModeDecomposition& dec : initials.at(method).modes)
            report.initial_spectra.push_back(dec.spec);
    }

    for (const EstimatorSpec& est : estimators) {
        IterOptions io = base;
        io.method = est.method;
        io.penalty = est.penalty;
        const InitialStats* stats = &initials.at(est.method);

        EstimatorReport er;
        er.label = est.label();
        er.method = est.method;
        er.penalty = est.penalty;
        er.stage = est.stage;
        if (est.stage == Stage::initial) {
            IterationState st = initial_state(series, io, stats);
            er.ranks = st.selected;
            er.converged = false;
            er.iterations = 0;
            er.rank_history = {st.selected};
        } else {
            if (est.stage == Stage::one_step) io.max_iter = 1;
            IterationResult res = iterate(series, io, stats);
            er.ranks = res.ranks_at(est.stage);
            er.converged = res.converged;
            er.iterations = static_cast<int>(res.history.size()) - 1;
            for (const IterationState& st : res.history) er.rank_history.push_back(st.selected);
        }
        report.estimators.push_back(std::move(er));
    }

    std::vector<int> usable;
    for (int h0 : opts.tau_h0_range)
        if (h0 < series.length()) usable.push_back(h0);
    for (int k = 0; k < series.order() && !usable.empty(); ++k) {
        const int m_max = std::min<std::int64_t>(opts.tau_m_max, series.dims()[static_cast<std::size_t>(k)]);
        report.tau_per_mode.push_back(
            tau_diagnostic(series, k, m_max, usable, -0.5, opts.moment));
    }
    return report;
}

}  // namespace tenrank
