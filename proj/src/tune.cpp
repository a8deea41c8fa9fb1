#include <algorithm>
#include <cmath>

#include "tenrank/criteria.hpp"
#include "tenrank/iterate.hpp"

namespace tenrank {

TuneSchedule TuneSchedule::nested(const std::vector<std::int64_t>& dims, std::int64_t T, int J) {
    if (J < 1) throw input_error("tune schedule needs J >= 1");
    TuneSchedule s;
    for (int j = 1; j <= J; ++j) {
        std::vector<std::int64_t> dj;
        for (std::int64_t d : dims) {
            auto v = static_cast<std::int64_t>(std::llround(static_cast<double>(d) * j / J));
            dj.push_back(std::clamp<std::int64_t>(v, 2, d));
        }
        s.dims_j.push_back(std::move(dj));
        s.T_j.push_back(T);
    }
    return s;
}

void TuneSchedule::validate(const std::vector<std::int64_t>& dims, std::int64_t T) const {
    if (dims_j.empty() || dims_j.size() != T_j.size())
        throw input_error("tune schedule must be non-empty with matching dims/T lists");
    for (std::size_t j = 0; j < dims_j.size(); ++j) {
        if (dims_j[j].size() != dims.size()) throw input_error("tune schedule dims must match series order");
        if (T_j[j] < 2 || T_j[j] > T) throw input_error("tune schedule T_j must lie in [2, T]");
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (dims_j[j][k] < 2 || dims_j[j][k] > dims[k])
                throw input_error("tune schedule dims must lie in [2, d_k]");
            if (j > 0 && dims_j[j][k] < dims_j[j - 1][k])
                throw input_error("tune schedule dims must be non-decreasing");
        }
        if (j > 0 && T_j[j] < T_j[j - 1]) throw input_error("tune schedule T_j must be non-decreasing");
    }
    if (dims_j.back() != dims || T_j.back() != T)
        throw input_error("tune schedule must end at the full sizes");
}

std::vector<double> TuneOptions::default_c_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(std::pow(10.0, -3.0 + 5.0 * i / 40.0));
    return grid;
}

TuneResult tune_c(const TensorSeries& series, int mode, const TuneOptions& opts) {
    const auto& dims = series.dims();
    const std::int64_t T = series.length();
    if (mode < 0 || mode >= series.order()) throw input_error("invalid mode index for tune_c");

    TuneSchedule schedule =
        opts.schedule.dims_j.empty() ? TuneSchedule::nested(dims, T) : opts.schedule;
    schedule.validate(dims, T);
    const int J = static_cast<int>(schedule.dims_j.size());

    std::vector<double> c_grid = opts.c_grid.empty() ? TuneOptions::default_c_grid() : opts.c_grid;
    if (c_grid.empty()) throw input_error("tune_c needs a non-empty c grid");
    if (!std::is_sorted(c_grid.begin(), c_grid.end()) || c_grid.front() <= 0.0)
        throw input_error("tune_c needs positive ascending c values");
    const int nc = static_cast<int>(c_grid.size());

    const int m_star_full = opts.m_star > 0
                                ? opts.m_star
                                : default_m_star(dims[static_cast<std::size_t>(mode)]);

    TuneResult out;
    out.c_grid = c_grid;
    out.ranks.assign(static_cast<std::size_t>(nc), std::vector<int>(static_cast<std::size_t>(J), 0));

    for (int j = 0; j < J; ++j) {
        TensorSeries sub = leading_block(series, schedule.dims_j[static_cast<std::size_t>(j)],
                                         schedule.T_j[static_cast<std::size_t>(j)]);

        IterOptions it;
        it.method = opts.method;
        it.penalty = PenaltySpec{Criterion::ic, opts.ic_variant, opts.nu, 1.0, 0.1};
        it.h0 = opts.h0;
        it.max_iter = opts.max_iter;
        it.subspace_tol = opts.subspace_tol;
        it.moment = opts.moment;
        it.m_star.resize(sub.dims().size());
        for (std::size_t k = 0; k < sub.dims().size(); ++k)
            it.m_star[k] = std::min<int>(m_star_full, static_cast<int>(sub.dims()[k] - 1));

        // The statistics do not depend on c; share them across the grid.
        InitialStats stats =
            compute_initial_stats(sub, it.method, it.h0, it.m_star, it.moment);
        for (int ci = 0; ci < nc; ++ci) {
            it.penalty.c_mult = c_grid[static_cast<std::size_t>(ci)];
            IterationResult res = iterate(sub, it, &stats);
            out.ranks[static_cast<std::size_t>(ci)][static_cast<std::size_t>(j)] =
                res.final_state().selected[static_cast<std::size_t>(mode)];
        }
    }

    out.stability.resize(static_cast<std::size_t>(nc));
    out.rank_at_full.resize(static_cast<std::size_t>(nc));
    for (int ci = 0; ci < nc; ++ci) {
        const auto& row = out.ranks[static_cast<std::size_t>(ci)];
        double mean = 0.0;
        for (int r : row) mean += r;
        mean /= J;
        double var = 0.0;
        for (int r : row) var += (r - mean) * (r - mean);
        out.stability[static_cast<std::size_t>(ci)] = var / J;
        out.rank_at_full[static_cast<std::size_t>(ci)] = row.back();
    }

    if (nc == 1) {
        out.found = true;
        out.c_hat = c_grid[0];
        out.rank = out.rank_at_full[0];
        out.note = "degenerate single-point c grid; returning its value unexamined";
        return out;
    }

    // Skip the leading plateau pinned at m*, then take the first maximal
    // zero-stability interval.
    constexpr double kZero = 1e-12;
    int start = 0;
    while (start < nc && out.rank_at_full[static_cast<std::size_t>(start)] == m_star_full) ++start;
    for (int ci = start; ci < nc; ++ci) {
        if (out.stability[static_cast<std::size_t>(ci)] < kZero) {
            out.found = true;
            out.c_hat = c_grid[static_cast<std::size_t>(ci)];
            out.rank = out.rank_at_full[static_cast<std::size_t>(ci)];
            return out;
        }
    }
    out.note = "no admissible zero-stability interval after the m* plateau";
    return out;
}

}  // namespace tenrank
