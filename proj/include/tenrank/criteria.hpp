#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenrank/moment.hpp"

namespace tenrank {

enum class Criterion { ic, er };

std::string criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

/// Penalty family selection. IC penalties are the g_{k,1..5} family scaled by
/// c_mult; ER penalties are the h_{k,1..5} family with constant c0 in variant 1.
struct PenaltySpec {
    Criterion criterion = Criterion::ic;
    int variant = 2;
    double nu = 0.0;     // IC only: strength of the weakest factor, in [0,1)
    double c_mult = 1.0; // IC multiplier
    double c0 = 0.1;     // ER variant-1 constant

    void validate() const;
    std::string label() const;  // e.g. "ic2", "er1"
};

/// IC penalty g_{k,variant}(d, T) * c_mult, with d = prod(dims), d_k = dims[mode].
double penalty_ic(int variant, const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                  double nu, int mode, double c_mult = 1.0);

/// ER penalty h_{k,variant}(d, T).
double penalty_er(int variant, const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                  int mode, double c0 = 0.1);

double penalty_value(const PenaltySpec& spec, const std::vector<std::int64_t>& dims,
                     std::int64_t T, int h0, int mode);

struct SelectionResult {
    int rank = 0;
    std::vector<double> objective;  // IC: cost at m = 0..m*; ER: ratio at m = 1..m*
    double penalty = 0.0;
};

/// rank = argmin_{0<=m<=m*} sum_{j>m} lambda_j + m*g. Ties pick the smallest m.
SelectionResult ic_select(const std::vector<double>& values, double g, int m_star);

/// rank = argmin_{1<=m<=m*} (lambda_{m+1}+h)/(lambda_m+h). Ties pick the smallest m.
SelectionResult er_select(const std::vector<double>& values, double h, int m_star);

SelectionResult select_rank(const EigenSpectrum& spec, const PenaltySpec& penalty,
                            const std::vector<std::int64_t>& dims, std::int64_t T, int h0,
                            int m_star);

/// Default search bound: floor(d_k / 2), at least 1, capped (default cap 20).
int default_m_star(std::int64_t dk, int cap = 20);

/// Subsample sizes for the robustified-c tuner: entry j restricts to the first
/// T_j observations and the first dims_j[k] coordinates in each mode.
struct TuneSchedule {
    std::vector<std::vector<std::int64_t>> dims_j;
    std::vector<std::int64_t> T_j;

    /// J nested subsamples with d_{k,j} = round(d_k * j / J) (>= 2) and T_j = T.
    static TuneSchedule nested(const std::vector<std::int64_t>& dims, std::int64_t T, int J = 10);
    void validate(const std::vector<std::int64_t>& dims, std::int64_t T) const;
};

struct TuneOptions {
    Method method = Method::topup;
    int ic_variant = 2;
    double nu = 0.0;
    int h0 = 1;
    int m_star = 0;  // 0 -> default_m_star of the full mode dimension
    std::vector<double> c_grid;
    TuneSchedule schedule;  // empty -> TuneSchedule::nested(dims, T)
    int max_iter = 50;
    double subspace_tol = 1e-6;
    MomentOptions moment;

    static std::vector<double> default_c_grid();
};

struct TuneResult {
    bool found = false;
    double c_hat = 0.0;
    int rank = 0;
    std::vector<double> c_grid;
    std::vector<double> stability;      // S_{k,c} per c
    std::vector<int> rank_at_full;      // \hat r_{k,c,J} per c
    std::vector<std::vector<int>> ranks;  // [c][j]
    std::string note;
};

/// Robustified-c tuner: estimates the mode-k rank on every (c, subsample) pair
/// with the iterative IC estimator, measures the subsample variance S_{k,c},
/// skips the initial plateau pinned at m*, and returns the smallest c of the
/// next zero-stability interval.
TuneResult tune_c(const TensorSeries& series, int mode, const TuneOptions& opts);

}  // namespace tenrank
