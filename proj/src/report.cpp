#include "tenrank/report.hpp"

#include <ostream>

namespace tenrank {

namespace {

nlohmann::json metrics_to_json(const CellMetrics& m) {
    nlohmann::json freq = nlohmann::json::array();
    for (const auto& [ranks, f] : m.frequency)
        freq.push_back({{"ranks", ranks}, {"frequency", f}});
    return {{"n", m.n},
            {"proportion_correct", m.proportion_correct},
            {"rmse_joint", m.rmse_joint},
            {"rmse_mode", m.rmse_mode},
            {"frequency", freq}};
}

}  // namespace

nlohmann::json result_to_json(const ResultTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ResultRow& row : table.rows) {
        nlohmann::json j{{"model", row.model}, {"d1", row.d1},       {"d2", row.d2},
                         {"T", row.T},         {"estimator", row.estimator}};
        if (row.error.empty()) {
            j["stage"] = stage_name(row.stage);
            j["metrics"] = metrics_to_json(row.metrics);
        } else {
            j["error"] = row.error;
        }
        rows.push_back(std::move(j));
    }
    return {{"schema", "tenrank-results"}, {"version", 1}, {"rows", rows}};
}

nlohmann::json estimate_to_json(const EstimateReport& report) {
    nlohmann::json spectra = nlohmann::json::array();
    for (const EigenSpectrum& s : report.initial_spectra)
        spectra.push_back({{"mode", s.mode + 1},
                           {"method", method_name(s.method)},
                           {"h0", s.h0},
                           {"values", s.values}});

    nlohmann::json estimators = nlohmann::json::array();
    for (const EstimatorReport& e : report.estimators)
        estimators.push_back({{"label", e.label},
                              {"ranks", e.ranks},
                              {"converged", e.converged},
                              {"iterations", e.iterations},
                              {"rank_history", e.rank_history}});

    nlohmann::json tau = nlohmann::json::array();
    for (std::size_t k = 0; k < report.tau_per_mode.size(); ++k)
        for (const TauRow& row : report.tau_per_mode[k])
            tau.push_back({{"mode", k + 1},
                           {"h0", row.h0},
                           {"m", row.m},
                           {"sigma_topup", row.sigma_topup},
                           {"sigma_tipup", row.sigma_tipup},
                           {"scaled_topup", row.scaled_topup},
                           {"scaled_tipup", row.scaled_tipup}});

    return {{"schema", "tenrank-estimate"},
            {"version", 1},
            {"dims", report.dims},
            {"T", report.T},
            {"h0", report.h0},
            {"demeaned", report.demeaned},
            {"initial_spectra", spectra},
            {"estimators", estimators},
            {"tau_diagnostic", tau}};
}

nlohmann::json tune_to_json(const std::vector<TuneResult>& per_mode) {
    nlohmann::json modes = nlohmann::json::array();
    for (std::size_t k = 0; k < per_mode.size(); ++k) {
        const TuneResult& r = per_mode[k];
        modes.push_back({{"mode", k + 1},
                         {"found", r.found},
                         {"c_hat", r.c_hat},
                         {"rank", r.rank},
                         {"c_grid", r.c_grid},
                         {"stability", r.stability},
                         {"rank_at_full", r.rank_at_full},
                         {"note", r.note}});
    }
    return {{"schema", "tenrank-tune"}, {"version", 1}, {"modes", modes}};
}

void write_tune_csv(std::ostream& out, const std::vector<TuneResult>& per_mode) {
    out << "mode,c,stability,rank_at_full";
    if (!per_mode.empty() && !per_mode.front().ranks.empty()) {
        const std::size_t J = per_mode.front().ranks.front().size();
        for (std::size_t j = 1; j <= J; ++j) out << ",rank_j" << j;
    }
    out << '\n';
    for (std::size_t k = 0; k < per_mode.size(); ++k) {
        const TuneResult& r = per_mode[k];
        for (std::size_t ci = 0; ci < r.c_grid.size(); ++ci) {
            out << (k + 1) << ',' << r.c_grid[ci] << ',' << r.stability[ci] << ','
                << r.rank_at_full[ci];
            for (int rank : r.ranks[ci]) out << ',' << rank;
            out << '\n';
        }
    }
}

void write_tau_csv(std::ostream& out, const std::vector<std::vector<TauRow>>& per_mode) {
    out << "mode,h0,m,sigma_topup,sigma_tipup,scaled_topup,scaled_tipup\n";
    for (std::size_t k = 0; k < per_mode.size(); ++k)
        for (const TauRow& row : per_mode[k])
            out << (k + 1) << ',' << row.h0 << ',' << row.m << ',' << row.sigma_topup << ','
                << row.sigma_tipup << ',' << row.scaled_topup << ',' << row.scaled_tipup << '\n';
}

}  // namespace tenrank
