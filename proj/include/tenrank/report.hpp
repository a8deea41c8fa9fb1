#pragma once

#include <json.hpp>

#include "tenrank/criteria.hpp"
#include "tenrank/experiment.hpp"

namespace tenrank {

/// JSON report schemas are versioned; all emitters stamp {"schema": name, "version": 1}.
nlohmann::json result_to_json(const ResultTable& table);
nlohmann::json estimate_to_json(const EstimateReport& report);
nlohmann::json tune_to_json(const std::vector<TuneResult>& per_mode);

/// Plot-ready CSV of the tuner output: one block per mode with the
/// (c, j) -> rank matrix and the S_{k,c} stability curve.
void write_tune_csv(std::ostream& out, const std::vector<TuneResult>& per_mode);

/// Plot-ready CSV of the signal-cancellation diagnostic.
void write_tau_csv(std::ostream& out, const std::vector<std::vector<TauRow>>& per_mode);

}  // namespace tenrank
