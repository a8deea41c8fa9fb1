#pragma once

#include <optional>
#include <vector>

#include "tenrank/criteria.hpp"
#include "tenrank/moment.hpp"

namespace tenrank {

enum class Stage { initial, one_step, final };

std::string stage_name(Stage s);
Stage stage_from_name(const std::string& name);

struct IterOptions {
    Method method = Method::tipup;
    PenaltySpec penalty;
    int h0 = 1;
    int max_iter = 50;
    double subspace_tol = 1e-6;
    /// When false, convergence requires only rank equality between sweeps.
    bool require_subspace_convergence = true;
    bool initial_inflation = true;
    std::optional<std::vector<int>> fixed_initial_ranks;
    /// Per-mode search bounds; empty -> default_m_star(d_k, m_star_cap).
    std::vector<int> m_star;
    int m_star_cap = 20;
    MomentOptions moment;
};

/// State after one sweep (or, at iter 0, after the non-iterative start).
struct IterationState {
    int iter = 0;
    /// Raw criterion selections (IC may select 0). At iter 0 this is the
    /// non-iterative estimate before inflation.
    std::vector<int> selected;
    /// Working ranks driving the projections: selections clamped to >= 1 and,
    /// at iter 0, inflated to min{2r, r+3} (clamped to [1, m*]).
    std::vector<int> ranks;
    std::vector<Eigen::MatrixXd> bases;  // bases[k]: d_k x ranks[k], orthonormal columns
    std::vector<EigenSpectrum> spectra;
    bool converged = false;
    bool rank_clamped = false;  // some selection was 0 and got clamped to 1
};

struct IterationResult {
    std::vector<IterationState> history;  // history[0] = initial, history[i] = sweep i
    bool converged = false;

    const IterationState& final_state() const { return history.back(); }
    const std::vector<int>& ranks_at(Stage stage) const;
};

/// Precomputed non-iterative decomposition per mode, reusable across penalty
/// settings (the statistic does not depend on the criterion).
struct InitialStats {
    std::vector<ModeDecomposition> modes;  // basis holds m_star_k columns
};

InitialStats compute_initial_stats(const TensorSeries& series, Method method, int h0,
                                   const std::vector<int>& m_star, const MomentOptions& opts = {});

/// Conservative starting rank: min{2r, r+3}, clamped to [1, m_star].
int inflate_initial_rank(int r, int m_star);

/// Per-mode starting ranks: non-iterative selection, then inflation.
std::vector<int> initial_ranks(const TensorSeries& series, const IterOptions& opts);

/// The iter-0 state alone (non-iterative selection plus inflated working ranks).
IterationState initial_state(const TensorSeries& series, const IterOptions& opts,
                             const InitialStats* precomputed = nullptr);

/// Alternating rank-and-subspace refinement. Sweeps ascend over modes with the
/// freshest bases; mode k is re-estimated from the series projected on all
/// other modes, with the penalty evaluated at the projected dims. Stops when
/// working ranks repeat and (optionally) the subspaces settle, or at max_iter.
IterationResult iterate(const TensorSeries& series, const IterOptions& opts,
                        const InitialStats* precomputed = nullptr);

/// Exactly iterate with a single sweep.
IterationResult one_step(const TensorSeries& series, const IterOptions& opts,
                         const InitialStats* precomputed = nullptr);

/// Z_{k,t}: x projected by bases[j]^T on every mode j != k.
Tensor project_except(const Tensor& x, const std::vector<Eigen::MatrixXd>& bases, int mode);

/// Resolved per-mode search bounds for a series under the given options.
std::vector<int> resolve_m_star(const std::vector<std::int64_t>& dims, const IterOptions& opts);

}  // namespace tenrank
