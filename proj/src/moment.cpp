#include "tenrank/moment.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace tenrank {

std::string method_name(Method m) { return m == Method::topup ? "topup" : "tipup"; }

Method method_from_name(const std::string& name) {
    if (name == "topup") return Method::topup;
    if (name == "tipup") return Method::tipup;
    throw input_error("unknown method '" + name + "' (expected topup or tipup)");
}

namespace {

struct ModeShape {
    std::int64_t dk = 0;
    std::int64_t dmk = 0;  // product of the remaining dims
};

ModeShape mode_shape(const std::vector<std::int64_t>& dims, int mode) {
    if (mode < 0 || mode >= static_cast<int>(dims.size()))
        throw input_error("invalid mode index " + std::to_string(mode));
    ModeShape s;
    s.dk = dims[static_cast<std::size_t>(mode)];
    s.dmk = 1;
    for (std::size_t j = 0; j < dims.size(); ++j)
        if (static_cast<int>(j) != mode) s.dmk *= dims[j];
    return s;
}

void check_lags(const TensorSeries& series, int h0) {
    if (h0 < 1) throw input_error("h0 must be >= 1");
    if (h0 >= series.length()) throw input_error("h0 must be smaller than the series length T");
}

/// Stack of mode-k unfoldings: column t is vec(mat_k(X_t)), so the buffer is
/// also readable as [mat_k(X_0) | mat_k(X_1) | ...] of width T * dmk.
Eigen::MatrixXd unfold_stack(const TensorSeries& series, int mode, const ModeShape& s) {
    const std::int64_t T = series.length();
    Eigen::MatrixXd v(s.dk * s.dmk, T);
    for (std::int64_t t = 0; t < T; ++t) {
        Eigen::MatrixXd m = mode_unfold(series.obs(t), mode);
        v.col(t) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    }
    return v;
}

struct ThinSvd {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd u;  // empty unless requested
};

/// Singular values (and optionally left vectors) of a short-and-wide stat.
/// Very wide inputs are reduced by a QR factorization of the transpose first.
ThinSvd thin_svd_left(const Eigen::MatrixXd& a, bool want_u) {
    ThinSvd out;
    if (a.cols() >= 2 * a.rows()) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
        Eigen::MatrixXd r = qr.matrixQR()
                                .topRows(a.rows())
                                .triangularView<Eigen::Upper>();
        const unsigned flags = want_u ? static_cast<unsigned>(Eigen::ComputeFullU) : 0u;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.transpose(), flags);
        out.sigma = svd.singularValues();
        if (want_u) out.u = svd.matrixU();
    } else {
        const unsigned flags = want_u ? static_cast<unsigned>(Eigen::ComputeThinU) : 0u;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(a, flags);
        out.sigma = svd.singularValues();
        if (want_u) out.u = svd.matrixU();
    }
    return out;
}

std::vector<double> clamp_descending(Eigen::VectorXd values, std::int64_t dk) {
    std::vector<double> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize(static_cast<std::size_t>(dk), 0.0);
    const double lead = v.empty() ? 0.0 : v.front();
    const double floor = -1e-10 * std::max(lead, 0.0);
    for (double& x : v) {
        if (x < floor)
            throw numeric_error("moment spectrum has eigenvalue " + std::to_string(x) +
                                " below the round-off tolerance");
        x = std::max(x, 0.0);
    }
    return v;
}

}  // namespace

std::int64_t MomentMatrix::rows() const { return mode_shape(source_dims, mode).dk; }

std::int64_t MomentMatrix::cols() const {
    const ModeShape s = mode_shape(source_dims, mode);
    return method == Method::topup ? s.dmk * s.dk * s.dmk * h0 : s.dk * h0;
}

const Eigen::MatrixXd& MomentMatrix::gram() const {
    if (gram_.size() == 0) gram_ = stat * stat.transpose();
    return gram_;
}

MomentMatrix tipup(const TensorSeries& series, int mode, int h0, const MomentOptions&) {
    check_lags(series, h0);
    const ModeShape s = mode_shape(series.dims(), mode);
    const std::int64_t T = series.length();

    MomentMatrix out;
    out.method = Method::tipup;
    out.mode = mode;
    out.h0 = h0;
    out.source_dims = series.dims();
    out.T = T;
    out.stat = Eigen::MatrixXd::Zero(s.dk, s.dk * h0);

    Eigen::MatrixXd v = unfold_stack(series, mode, s);
    for (int h = 1; h <= h0; ++h) {
        auto block = out.stat.middleCols(static_cast<std::int64_t>(h - 1) * s.dk, s.dk);
        for (std::int64_t t = h; t < T; ++t) {
            Eigen::Map<const Eigen::MatrixXd> lagged(v.col(t - h).data(), s.dk, s.dmk);
            Eigen::Map<const Eigen::MatrixXd> current(v.col(t).data(), s.dk, s.dmk);
            block.noalias() += lagged * current.transpose();
        }
        block /= static_cast<double>(T - h);
    }
    return out;
}

MomentMatrix topup(const TensorSeries& series, int mode, int h0, const MomentOptions& opts) {
    check_lags(series, h0);
    const ModeShape s = mode_shape(series.dims(), mode);
    const std::int64_t T = series.length();

    MomentMatrix out;
    out.method = Method::topup;
    out.mode = mode;
    out.h0 = h0;
    out.source_dims = series.dims();
    out.T = T;

    const std::int64_t block_cols = s.dmk * s.dk * s.dmk;
    Eigen::MatrixXd v = unfold_stack(series, mode, s);

    if (s.dk * block_cols * h0 <= opts.stat_entry_cap) {
        out.stat = Eigen::MatrixXd::Zero(s.dk, block_cols * h0);
        for (int h = 1; h <= h0; ++h) {
            auto block = out.stat.middleCols(static_cast<std::int64_t>(h - 1) * block_cols, block_cols);
            for (std::int64_t t = h; t < T; ++t) {
                Eigen::Map<const Eigen::MatrixXd> lagged(v.col(t - h).data(), s.dk, s.dmk);
                const auto& w = v.col(t);  // vec(mat_k(X_t)), length dk*dmk
                for (std::int64_t l = 0; l < s.dk * s.dmk; ++l)
                    block.middleCols(l * s.dmk, s.dmk).noalias() += w(l) * lagged;
            }
            block /= static_cast<double>(T - h);
        }
        return out;
    }

    // Blockwise Gram accumulation: with B_h the lag-h block of the stat,
    //   B_h B_h' = sum_{t,s} <X_t, X_s> mat_k(X_{t-h}) mat_k'(X_{s-h}) / (T-h)^2,
    // so the Gram needs only the T x T inner-product matrix, never the stat.
    Eigen::MatrixXd inner = v.transpose() * v;
    out.gram_ = Eigen::MatrixXd::Zero(s.dk, s.dk);
    for (int h = 1; h <= h0; ++h) {
        const std::int64_t n = T - h;
        Eigen::Map<const Eigen::MatrixXd> lag_cat(v.data(), s.dk, n * s.dmk);
        Eigen::MatrixXd mixed = v.leftCols(n) * inner.bottomRightCorner(n, n);
        Eigen::Map<const Eigen::MatrixXd> mixed_cat(mixed.data(), s.dk, n * s.dmk);
        out.gram_.noalias() +=
            (lag_cat * mixed_cat.transpose()) / (static_cast<double>(n) * static_cast<double>(n));
    }
    return out;
}

MomentMatrix auto_moment(const TensorSeries& series, Method method, int mode, int h0,
                         const MomentOptions& opts) {
    return method == Method::topup ? topup(series, mode, h0, opts) : tipup(series, mode, h0, opts);
}

EigenSpectrum spectrum(const MomentMatrix& m) {
    EigenSpectrum out;
    out.mode = m.mode;
    out.method = m.method;
    out.h0 = m.h0;
    if (m.has_stat()) {
        Eigen::VectorXd sigma = thin_svd_left(m.stat, false).sigma;
        out.values = clamp_descending(sigma.array().square(), m.rows());
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.gram());
        if (eig.info() != Eigen::Success) throw numeric_error("eigendecomposition of Gram matrix failed");
        out.values = clamp_descending(eig.eigenvalues(), m.rows());
    }
    return out;
}

Eigen::MatrixXd leading_subspace(const MomentMatrix& m, int r) {
    return decompose(m, r).basis;
}

ModeDecomposition decompose(const MomentMatrix& m, int max_rank) {
    const std::int64_t dk = m.rows();
    if (max_rank < 1 || max_rank > dk)
        throw input_error("subspace rank " + std::to_string(max_rank) + " out of range [1, " +
                          std::to_string(dk) + "]");
    ModeDecomposition out;
    out.spec.mode = m.mode;
    out.spec.method = m.method;
    out.spec.h0 = m.h0;
    if (m.has_stat()) {
        ThinSvd svd = thin_svd_left(m.stat, true);
        out.spec.values = clamp_descending(svd.sigma.array().square(), dk);
        out.basis = svd.u.leftCols(max_rank);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.gram());
        if (eig.info() != Eigen::Success) throw numeric_error("eigendecomposition of Gram matrix failed");
        out.spec.values = clamp_descending(eig.eigenvalues(), dk);
        out.basis = eig.eigenvectors().rowwise().reverse().leftCols(max_rank);
    }
    return out;
}

std::vector<TauRow> tau_diagnostic(const TensorSeries& series, int mode, int m_max,
                                   const std::vector<int>& h0_range, double norm_exponent,
                                   const MomentOptions& opts) {
    if (h0_range.empty()) throw input_error("tau_diagnostic needs a non-empty h0 range");
    const ModeShape s = mode_shape(series.dims(), mode);
    if (m_max < 1 || m_max > s.dk) throw input_error("m_max out of range for tau_diagnostic");

    std::vector<TauRow> rows;
    for (int h0 : h0_range) {
        EigenSpectrum top = spectrum(topup(series, mode, h0, opts));
        EigenSpectrum tip = spectrum(tipup(series, mode, h0, opts));
        const double scale = std::pow(static_cast<double>(h0), norm_exponent);
        for (int m = 1; m <= m_max; ++m) {
            TauRow row;
            row.h0 = h0;
            row.m = m;
            row.sigma_topup = std::sqrt(top.values[static_cast<std::size_t>(m - 1)]);
            row.sigma_tipup = std::sqrt(tip.values[static_cast<std::size_t>(m - 1)]);
            row.scaled_topup = scale * row.sigma_topup;
            row.scaled_tipup = scale * row.sigma_tipup;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace tenrank
