#include "tenrank/iterate.hpp"

#include <algorithm>
#include <cmath>

namespace tenrank {

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::initial: return "initial";
        case Stage::one_step: return "one_step";
        case Stage::final: return "final";
    }
    return "?";
}

Stage stage_from_name(const std::string& name) {
    if (name == "initial") return Stage::initial;
    if (name == "one_step" || name == "one-step") return Stage::one_step;
    if (name == "final") return Stage::final;
    throw input_error("unknown stage '" + name + "' (expected initial, one_step or final)");
}

const std::vector<int>& IterationResult::ranks_at(Stage stage) const {
    switch (stage) {
        case Stage::initial: return history.front().selected;
        case Stage::one_step: return history.at(1).selected;
        case Stage::final: return history.back().selected;
    }
    return history.back().selected;
}

std::vector<int> resolve_m_star(const std::vector<std::int64_t>& dims, const IterOptions& opts) {
    const int K = static_cast<int>(dims.size());
    std::vector<int> out(static_cast<std::size_t>(K));
    if (!opts.m_star.empty() && static_cast<int>(opts.m_star.size()) != K)
        throw input_error("m_star must have one entry per mode");
    for (int k = 0; k < K; ++k) {
        const std::int64_t dk = dims[static_cast<std::size_t>(k)];
        int m = opts.m_star.empty() ? default_m_star(dk, opts.m_star_cap)
                                    : opts.m_star[static_cast<std::size_t>(k)];
        if (m < 1 || m >= dk)
            throw input_error("m_star for mode " + std::to_string(k) + " must lie in [1, d_k)");
        out[static_cast<std::size_t>(k)] = m;
    }
    return out;
}

Tensor project_except(const Tensor& x, const std::vector<Eigen::MatrixXd>& bases, int mode) {
    if (static_cast<int>(bases.size()) != x.order())
        throw input_error("project_except needs one basis per mode");
    Tensor z = x;
    for (int j = 0; j < x.order(); ++j) {
        if (j == mode) continue;
        z = mode_product(z, bases[static_cast<std::size_t>(j)].transpose(), j);
    }
    return z;
}

int inflate_initial_rank(int r, int m_star) {
    const int inflated = std::min(2 * r, r + 3);
    return std::clamp(inflated, 1, m_star);
}

InitialStats compute_initial_stats(const TensorSeries& series, Method method, int h0,
                                   const std::vector<int>& m_star, const MomentOptions& opts) {
    InitialStats out;
    const int K = series.order();
    out.modes.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        MomentMatrix m = auto_moment(series, method, k, h0, opts);
        out.modes.push_back(decompose(m, m_star[static_cast<std::size_t>(k)]));
    }
    return out;
}

namespace {

void check_series(const TensorSeries& series, const IterOptions& opts) {
    if (series.length() <= opts.h0) throw input_error("series length must exceed h0");
    if (opts.max_iter < 1) throw input_error("max_iter must be >= 1");
    for (std::int64_t d : series.dims())
        if (d < 2) throw input_error("every mode dimension must be >= 2 for rank estimation");
}

double projector_distance(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    Eigen::MatrixXd diff = u * u.transpose() - v * v.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

IterationState make_initial_state(const TensorSeries& series, const IterOptions& opts,
                                  const InitialStats& stats, const std::vector<int>& m_star) {
    const int K = series.order();
    IterationState st;
    st.iter = 0;
    st.selected.resize(static_cast<std::size_t>(K));
    st.ranks.resize(static_cast<std::size_t>(K));
    st.bases.resize(static_cast<std::size_t>(K));
    st.spectra.resize(static_cast<std::size_t>(K));

    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const ModeDecomposition& dec = stats.modes[ku];
        st.spectra[ku] = dec.spec;
        SelectionResult sel =
            select_rank(dec.spec, opts.penalty, series.dims(), series.length(), opts.h0, m_star[ku]);
        st.selected[ku] = sel.rank;

        int working;
        if (opts.fixed_initial_ranks) {
            working = opts.fixed_initial_ranks->at(ku);
            if (working < 1 || working > m_star[ku])
                throw input_error("fixed initial rank out of [1, m*] for mode " + std::to_string(k));
        } else if (opts.initial_inflation) {
            working = inflate_initial_rank(std::max(sel.rank, 1), m_star[ku]);
        } else {
            working = std::clamp(sel.rank, 1, m_star[ku]);
        }
        if (sel.rank == 0) st.rank_clamped = true;
        st.ranks[ku] = working;
        st.bases[ku] = dec.basis.leftCols(working);
    }
    return st;
}

}  // namespace

std::vector<int> initial_ranks(const TensorSeries& series, const IterOptions& opts) {
    return initial_state(series, opts).ranks;
}

IterationState initial_state(const TensorSeries& series, const IterOptions& opts,
                             const InitialStats* precomputed) {
    check_series(series, opts);
    opts.penalty.validate();
    const std::vector<int> m_star = resolve_m_star(series.dims(), opts);
    InitialStats local;
    if (!precomputed) {
        local = compute_initial_stats(series, opts.method, opts.h0, m_star, opts.moment);
        precomputed = &local;
    }
    return make_initial_state(series, opts, *precomputed, m_star);
}

IterationResult iterate(const TensorSeries& series, const IterOptions& opts,
                        const InitialStats* precomputed) {
    check_series(series, opts);
    opts.penalty.validate();
    const int K = series.order();
    const std::int64_t T = series.length();
    const std::vector<int> m_star = resolve_m_star(series.dims(), opts);

    InitialStats local;
    if (!precomputed) {
        local = compute_initial_stats(series, opts.method, opts.h0, m_star, opts.moment);
        precomputed = &local;
    }

    IterationResult result;
    result.history.push_back(make_initial_state(series, opts, *precomputed, m_star));

    for (int i = 1; i <= opts.max_iter; ++i) {
        const IterationState& prev = result.history.back();
        IterationState st;
        st.iter = i;
        st.selected.resize(static_cast<std::size_t>(K));
        st.ranks = prev.ranks;
        st.bases = prev.bases;
        st.spectra.resize(static_cast<std::size_t>(K));

        for (int k = 0; k < K; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            // Freshest bases: modes < k from this sweep, modes > k from the previous one.
            std::vector<Tensor> projected;
            projected.reserve(static_cast<std::size_t>(T));
            for (std::int64_t t = 0; t < T; ++t)
                projected.push_back(project_except(series.obs(t), st.bases, k));
            TensorSeries z(std::move(projected));

            MomentMatrix m = auto_moment(z, opts.method, k, opts.h0, opts.moment);
            ModeDecomposition dec = decompose(m, m_star[ku]);
            st.spectra[ku] = dec.spec;

            SelectionResult sel =
                select_rank(dec.spec, opts.penalty, z.dims(), T, opts.h0, m_star[ku]);
            st.selected[ku] = sel.rank;
            if (sel.rank == 0) st.rank_clamped = true;
            st.ranks[ku] = std::max(sel.rank, 1);
            st.bases[ku] = dec.basis.leftCols(st.ranks[ku]);
        }

        bool done = st.ranks == prev.ranks;
        if (done && opts.require_subspace_convergence) {
            for (int k = 0; k < K && done; ++k)
                done = projector_distance(st.bases[static_cast<std::size_t>(k)],
                                          prev.bases[static_cast<std::size_t>(k)]) < opts.subspace_tol;
        }
        st.converged = done;
        result.history.push_back(std::move(st));
        if (done) {
            result.converged = true;
            break;
        }
    }
    return result;
}

IterationResult one_step(const TensorSeries& series, const IterOptions& opts,
                         const InitialStats* precomputed) {
    IterOptions single = opts;
    single.max_iter = 1;
    return iterate(series, single, precomputed);
}

}  // namespace tenrank
