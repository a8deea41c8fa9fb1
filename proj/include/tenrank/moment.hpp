#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tenrank/tensor.hpp"

namespace tenrank {

enum class Method { topup, tipup };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct MomentOptions {
    /// Largest TOPUP stat (in entries) that is materialized. Above the cap the
    /// Gram matrix is accumulated blockwise instead; the spectrum is identical.
    std::int64_t stat_entry_cap = 100'000'000;
};

/// The rectangular TOPUP_k / TIPUP_k statistic for one mode, together with its
/// d_k x d_k Gram form. Lag blocks h = 1..h0 are concatenated left to right.
class MomentMatrix {
  public:
    Method method = Method::tipup;
    int mode = 0;
    int h0 = 1;
    std::vector<std::int64_t> source_dims;  // dims of the series the stat was built from
    std::int64_t T = 0;

    /// Rectangular statistic; empty when the TOPUP stat exceeded the cap.
    Eigen::MatrixXd stat;

    bool has_stat() const { return stat.size() > 0; }
    std::int64_t rows() const;
    /// Column count of the statistic per the method's shape formula,
    /// valid whether or not the stat was materialized.
    std::int64_t cols() const;

    /// stat * stat^T, cached on first use (precomputed when the stat is not kept).
    const Eigen::MatrixXd& gram() const;

    friend MomentMatrix topup(const TensorSeries&, int, int, const MomentOptions&);
    friend MomentMatrix tipup(const TensorSeries&, int, int, const MomentOptions&);

  private:
    mutable Eigen::MatrixXd gram_;
};

MomentMatrix topup(const TensorSeries& series, int mode, int h0, const MomentOptions& opts = {});
MomentMatrix tipup(const TensorSeries& series, int mode, int h0, const MomentOptions& opts = {});
MomentMatrix auto_moment(const TensorSeries& series, Method method, int mode, int h0,
                         const MomentOptions& opts = {});

/// Descending eigenvalues of one Gram matrix (= squared singular values of the stat).
struct EigenSpectrum {
    int mode = 0;
    Method method = Method::tipup;
    int h0 = 1;
    std::vector<double> values;  // length d_k, descending, >= 0
};

/// Eigenvalues of gram(), via singular values of the stat when it is
/// materialized. Negatives beyond -1e-10 * lambda_1 are a hard error.
EigenSpectrum spectrum(const MomentMatrix& m);

/// Top-r left singular vectors of the stat (d_k x r, orthonormal columns).
Eigen::MatrixXd leading_subspace(const MomentMatrix& m, int r);

/// Spectrum and leading subspace from a single factorization.
struct ModeDecomposition {
    EigenSpectrum spec;
    Eigen::MatrixXd basis;  // d_k x max_rank
};
ModeDecomposition decompose(const MomentMatrix& m, int max_rank);

/// One row of the signal-cancellation diagnostic: the m-th singular value of
/// the TOPUP and TIPUP stats at max lag h0, raw and scaled by h0^norm_exponent.
struct TauRow {
    int h0 = 1;
    int m = 1;
    double sigma_topup = 0;
    double sigma_tipup = 0;
    double scaled_topup = 0;
    double scaled_tipup = 0;
};

/// Singular-value pattern across a range of h0 values; comparing the scaled
/// TOPUP and TIPUP columns exposes signal cancellation in the TIPUP sums.
std::vector<TauRow> tau_diagnostic(const TensorSeries& series, int mode, int m_max,
                                   const std::vector<int>& h0_range, double norm_exponent = -0.5,
                                   const MomentOptions& opts = {});

}  // namespace tenrank
